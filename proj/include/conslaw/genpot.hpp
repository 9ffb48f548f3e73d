#pragma once

#include <utility>
#include <vector>

#include "conslaw/interval.hpp"
#include "conslaw/measures.hpp"

namespace conslaw::genpot {

/*!
  Initial data for the generalized potential. The cumulative mass m0 is
  anchored at base: F(y) sums atoms in (base, y) for y > base and atoms in
  [y, base) for y < base, both with a plus sign. With base left of every
  atom, F(y) is the plain cumulative sum over atoms below y.
*/
struct GenPotData {
  AtomicMeasure rho0;
  StepFunction u0;
  double base = 0.0;

  StepFunction m0() const { return cumulative_mass(rho0, base); }
};

//! Same data with the base moved strictly left of the support.
GenPotData left_anchored(const GenPotData& data);

double potential_F(const GenPotData& data, double y, double x, double t);

struct MinimizerSet {
  double v;
  //! Minimizing branches k, F constant on (a_k, a_{k+1}] with 1-based atoms.
  std::vector<std::size_t> branches;
  //! Closed components of S; outer ends may be infinite.
  std::vector<Interval> components;
  //! inf S and sup S, clipped to the outermost atoms.
  double y_star;
  double y_star_upper;
  //! F(sup S) == v; false means only the left limit reaches the minimum.
  bool attained_at_upper;
  //! F(y0 + 0) at y0 = sup S, recorded for comparison with v.
  double right_limit_value;
};

MinimizerSet minimize_F(const GenPotData& data, double x, double t);

//! Straight line through (x0, t0) and (y, 0).
struct Characteristic {
  double x0;
  double t0;
  double y;

  double at(double t) const { return y + (x0 - y) * t / t0; }
  double slope() const { return (x0 - y) / t0; }
};

std::pair<Characteristic, Characteristic> backward_characteristics(double x0, double t0,
                                                                   const MinimizerSet& s);

//! Max difference quotient of u over consecutive breakpoints, minus 1/t.
double entropy_check(const StepFunction& u, double t);

/*!
  True iff y_* and y^* are nondecreasing along the grid and y^*(x1) <=
  y_*(x2) for consecutive points, except where both minimizer sets share a
  branch (atomic data makes F flat between atoms).
*/
bool monotonicity_scan(const GenPotData& data, double t, const std::vector<double>& xs);

struct PlateauCluster {
  double position;
  std::size_t first_atom;
  std::size_t last_atom;
  double mass;
  double velocity;
};

/*!
  Clusters at time t from the lower envelope of the branch lines
  x -> C_k - M_k x of the left-anchored potential. A cluster sits where the
  minimizing branch jumps; the skipped atoms form it.
*/
std::vector<PlateauCluster> plateau_clusters(const GenPotData& data, double t);

//! Velocity field with a breakpoint at each cluster, value = its velocity.
StepFunction velocity_field(const std::vector<PlateauCluster>& clusters);

}  // namespace conslaw::genpot
