#pragma once

#include <cstdint>
#include <vector>

#include "conslaw/fronttrack.hpp"
#include "conslaw/randstats.hpp"

namespace conslaw::randstats {

//! Front-tracking solutions of independent realizations of one law.
struct Ensemble {
  fronttrack::FluxTable flux;
  std::uint64_t seed;
  double t_end;
  std::vector<fronttrack::FrontHistory> runs;

  //! Earliest front interaction over all realizations.
  double first_interaction() const;
};

//! Block data for a step function whose values are all table states.
fronttrack::FrontList to_fronts(const StepFunction& u0, const fronttrack::FluxTable& flux);

/*!
  Samples n realizations with seeds realization_seed(seed, i) and evolves
  each to t_end. Work is split over `workers` threads; the result does not
  depend on the split.
*/
Ensemble run_ensemble(const InitialLaw& law, const fronttrack::FluxTable& flux, std::size_t n,
                      std::uint64_t seed, double t_end, unsigned workers = 1);

enum class Interpretation { p1, p2_density, f1, f2 };

/*!
  Per grid point and state (p1) or ordered state pair l*M + m (densities):
  realization counts, value and standard error. Densities count fronts with
  states l|m in [x, x + window), divided by N * window.
*/
struct NPointEstimate {
  Interpretation kind;
  std::vector<double> grid;
  std::size_t states;
  std::size_t samples;
  double window;
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::vector<double>> value;
  std::vector<std::vector<double>> stderr_;
};

//! p1(x, t; l): fraction of realizations with u(x-, t) = u_l.
NPointEstimate estimate_p1(const Ensemble& e, double t, const std::vector<double>& grid);

//! p2(x, x+, t; l, m) as a spatial density of l|m fronts. window <= 0 picks
//! (grid span) / sqrt(N).
NPointEstimate estimate_p2(const Ensemble& e, double t, const std::vector<double>& grid,
                           double window = 0.0);

struct HierarchyResult {
  double lhs;
  double rhs;
  double residual;
  double stderr_;
  //! t + dt precedes every interaction of the ensemble.
  bool before_interaction;
  //! Fewer than 30 realizations; the standard error is unreliable.
  bool small_ensemble;
};

/*!
  First hierarchy at level k (0-based, between states k and k+1):
  d/dt sum_{l>k} p1 = c_k [sum_{l>k, m<=k} p2 - sum_{l<=k, m>k} p2],
  with a centred time difference and p2 counted on [x, x + w).
*/
HierarchyResult hierarchy_residual_first(const Ensemble& e, std::size_t k, double x, double t,
                                         double dt, double w);

/*!
  Second hierarchy for the front type (u, v) at x. The left side is the
  change in the count of (u, v) fronts in a window [x, x + h) carried along
  at speed c_uv from t - dt to t + dt, divided by 2 dt h. The right side
  sums, over approaching neighbour pairs at time t, the closing speed times
  the near-contact pair density: creation from (u,w)(w,v), loss to a right
  neighbour (v,w) and loss to a left neighbour (w,u). Pair densities take
  the member in [x, x + h) and its neighbour within delta, divided by h delta.
*/
HierarchyResult hierarchy_residual_second(const Ensemble& e, std::size_t u, std::size_t v,
                                          double x, double t, double dt, double h, double delta);

}  // namespace conslaw::randstats
