#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "conslaw/measures.hpp"

namespace conslaw::randstats {

//! Seed of realization `index` in a stream started from `seed`.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index);

//! Jump from u_l to u_r at a location uniform on [lo, hi].
struct Riemann {
  double u_l;
  double u_r;
  double lo = 0.0;
  double hi = 0.0;
};

/*!
  Jump chain on [lo, hi]: holding lengths are exponential with the given
  rate, then the next state is drawn from the transition row. The initial
  state follows `initial` (uniform if empty). The path is constant outside
  the domain.
*/
struct MarkovChain {
  std::vector<double> states;
  std::vector<std::vector<double>> transition;
  double rate;
  double lo;
  double hi;
  std::vector<double> initial;
};

/*!
  Linear drift between downward jumps: u(x) = start + drift (x - lo) minus the
  sizes of the jumps left of x. Jumps arrive at `jump_rate` with exponential
  sizes of mean `jump_mean`. `grid` is the state set the path is snapped to.
*/
struct SpectrallyNegative {
  double start;
  double drift;
  double jump_rate;
  double jump_mean;
  double lo;
  double hi;
  std::vector<double> grid;
};

//! psi as a linearly interpolated Gaussian walk on [lo, hi], psi(lo) = 0.
struct BrownianPotential {
  double variance;
  double step;
  double lo;
  double hi;
};

/*!
  Two downward jumps u_left -> u_mid at a ~ U[a_lo, a_hi] and u_mid ->
  u_right at a + g with g ~ U[g_lo, g_hi].
*/
struct TwoShock {
  double u_left;
  double u_mid;
  double u_right;
  double a_lo;
  double a_hi;
  double g_lo;
  double g_hi;
};

using InitialLaw = std::variant<Riemann, MarkovChain, SpectrallyNegative, BrownianPotential, TwoShock>;

void validate(const InitialLaw& law);

//! Piecewise-constant initial velocity; for a Brownian potential u0 = -psi'.
StepFunction sample_initial(const InitialLaw& law, std::uint64_t seed);

struct DownJump {
  double x;
  double size;
};

struct SpectralPath {
  double lo;
  double hi;
  double start;
  double drift;
  std::vector<DownJump> jumps;

  double operator()(double x) const;
  //! Largest grid state at or below the path, clamped to the lowest state.
  StepFunction snap(const std::vector<double>& grid) const;
};

SpectralPath sample_spectral_path(const SpectrallyNegative& law, std::uint64_t seed);

PiecewiseLinear sample_potential(const BrownianPotential& law, std::uint64_t seed);

/*!
  b(y, t) = b0 / (1 + t f'' b0) at each y. Throws BlowupError carrying the
  earliest critical time if the denominator is not positive somewhere.
*/
std::vector<double> drift_evolution(const std::function<double(double)>& b0,
                                    const std::function<double(double)>& fpp, double t,
                                    const std::vector<double>& ys);

double drift_evolution(double b0, double fpp, double t);

//! (V_y, V_z) with V_y = (chord - f'(y)) b(y) and V_z = (chord - f'(z)) b(z).
std::pair<double, double> coalescence_velocities(const std::function<double(double)>& f,
                                                 const std::function<double(double)>& fprime,
                                                 double y, double z, double by, double bz);

struct ShockSample {
  double x_star;
  double xi_minus;
  double xi_plus;
  double mu;
  double nu;
};

struct Contact {
  bool shock;
  double xi_minus;
  double xi_plus;
  //! (x - xi_minus) / t.
  double u;
  ShockSample sample;
};

/*!
  Minimizers of (x - y)^2 / (2t) - psi(y) over knots and interior stationary
  points y = x + s t of each linear piece (tails included). Throws
  domain_too_small if a minimizer is a tailless end knot.
*/
Contact parabola_contacts(const PiecewiseLinear& psi, double x_star, double t);

/*!
  Shocks in [lo, hi] at time t, located by bisection wherever xi grows faster
  than x across a grid cell of width `step` (xi grows at rate 1 in smooth
  regions and 0 in fans). Shocks weaker than `step` may be missed.
*/
std::vector<ShockSample> find_shocks(const PiecewiseLinear& psi, double t, double lo, double hi,
                                     double step);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t below = 0;
  std::uint64_t above = 0;
};

Histogram histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins);

}  // namespace conslaw::randstats
