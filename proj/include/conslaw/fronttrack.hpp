#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "conslaw/sticky.hpp"

namespace conslaw::fronttrack {

//! Piecewise-linear flux through (u_k, f_k) on increasing states.
class FluxTable {
 public:
  FluxTable(std::vector<double> states, std::vector<double> values);

  std::size_t size() const noexcept { return states_.size(); }
  double state(std::size_t k) const { return states_.at(k); }
  double flux(std::size_t k) const { return values_.at(k); }
  const std::vector<double>& states() const noexcept { return states_; }
  const std::vector<double>& values() const noexcept { return values_; }
  //! c_k between states k and k+1.
  const std::vector<double>& slopes() const noexcept { return slopes_; }
  bool is_convex() const noexcept { return convex_; }
  //! Rankine-Hugoniot speed between two distinct states.
  double speed(std::size_t l, std::size_t r) const;
  //! Index of an exact state value; throws if absent.
  std::size_t index_of(double u) const;

 private:
  std::vector<double> states_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  bool convex_;
};

//! Table sampling f on the given states.
template <class F>
FluxTable sample_flux(const std::vector<double>& states, F&& f) {
  std::vector<double> values;
  values.reserve(states.size());
  for (double u : states) values.push_back(f(u));
  return FluxTable(states, std::move(values));
}

struct Front {
  double position;
  std::size_t left;
  std::size_t right;
  double speed;
};

/*!
  Entropy solution of the Riemann problem at x: one shock if l > r, else a
  fan of contacts (k, k+1) at speeds c_k. Throws non_convex for a
  non-convex table.
*/
std::vector<Front> riemann_solve(const FluxTable& flux, std::size_t l, std::size_t r,
                                 double x = 0.0);

//! Fronts at one instant; far_left is the state left of every front.
struct FrontList {
  double time = 0.0;
  std::size_t far_left = 0;
  std::vector<Front> fronts;

  std::size_t far_right() const { return fronts.empty() ? far_left : fronts.back().right; }
};

//! Block data: state blocks[i] between breaks[i-1] and breaks[i].
FrontList from_blocks(const FluxTable& flux, const std::vector<double>& breaks,
                      const std::vector<std::size_t>& blocks, double t0 = 0.0);

//! One straight piece of a front's world line.
struct Segment {
  double t_birth;
  double x_birth;
  double t_death;
  std::size_t left;
  std::size_t right;
  double speed;

  double at(double t) const { return x_birth + speed * (t - t_birth); }
};

struct Interaction {
  double time;
  double position;
  std::size_t left;
  std::size_t right;
  std::size_t incoming;
  std::size_t outgoing;
};

//! Complete evolution: every segment ever alive plus the interactions.
struct FrontHistory {
  double t0;
  double t1;
  std::size_t far_left;
  std::vector<Segment> segments;
  std::vector<Interaction> interactions;

  //! Fronts alive at t, ordered left to right.
  FrontList snapshot(double t) const;
  //! Earliest interaction time, +inf if none.
  double first_interaction() const;
};

FrontHistory evolve_recorded(const FrontList& fl, const FluxTable& flux, double t);
FrontList evolve(const FrontList& fl, const FluxTable& flux, double t);

//! (u(x-), u(x+)) as state indices.
std::pair<std::size_t, std::size_t> sample(const FrontList& fl, double x);

double rh_residual(const FrontList& fl, const FluxTable& flux);

double total_variation(const FrontList& fl, const FluxTable& flux);

/*!
  Flux table and fronts whose solution is U = -M for the cumulative mass M
  of a particle system with nonincreasing velocities. The flux is
  g(U) = -A(-U); fronts sit at particles and move like sticky clusters.
*/
struct StickyCorrespondence {
  FluxTable flux;
  FrontList initial;
};

StickyCorrespondence from_particles(const sticky::ParticleSystem& sys);

}  // namespace conslaw::fronttrack
