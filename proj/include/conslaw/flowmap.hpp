#pragma once

#include <optional>
#include <vector>

#include "conslaw/interval.hpp"
#include "conslaw/measures.hpp"
#include "conslaw/sticky.hpp"

namespace conslaw::flowmap {

//! phi_t(y) = y + t u on one piece of u0.
struct MapBranch {
  Interval domain;
  double velocity;
};

//! Free-streaming flow map y -> y + t u0(y), one branch per piece of u0 and
//! one per breakpoint.
struct FlowMap {
  double t;
  std::vector<MapBranch> branches;

  double operator()(double y) const;
};

FlowMap forward_map(const StepFunction& u0, double t);

enum class PointClass { regular, shock, gap };

//! One element of the Lagrangian partition.
struct Element {
  Interval lagrangian;
  //! Unswept background maps by the identity; clusters map to one point.
  bool background;
  double image;
  double mass;
  double velocity;
  std::size_t first_atom;
  std::size_t last_atom;
};

/*!
  Partition of the initial line at time t. Each cluster owns its atoms and
  the background it swept first; background nobody reached stays at rest.
  Gaps are the Eulerian ranges swept by a cluster, minus its own position.
*/
struct Partition {
  double t;
  std::vector<Element> elements;
  std::vector<Interval> gaps;

  PointClass classify(double x) const;
  //! Lagrangian preimage of an Eulerian point; empty for gaps.
  std::optional<Interval> preimage(double x) const;
  //! Lagrangian-to-Eulerian map induced by the partition.
  double image(double y) const;
  const Element& element_of(double y) const;
};

//! Sticky system whose atoms start at P0 with velocities u0(atom).
sticky::ParticleSystem initial_system(const AtomicMeasure& p0, const StepFunction& u0);

Partition inverse_partition(const AtomicMeasure& p0, const StepFunction& u0, double t);

struct GvpCluster {
  std::size_t first_atom;
  std::size_t last_atom;
  double mass;
  double position;
  double velocity;
};

/*!
  True iff every mass-carrying average of eta + t u0(eta) over [y-, y) is
  strictly below every one over [y, y+]; vacuous where either side has no
  atoms.
*/
bool left_endpoint_test(const AtomicMeasure& p0, const StepFunction& u0, double t,
                        double y);

//! Clusters at time t from the left-endpoint criterion alone.
std::vector<GvpCluster> gvp_clusters(const AtomicMeasure& p0, const StepFunction& u0,
                                     double t);

struct GvpValue {
  double phi;
  double u;
};

//! Mass averages over the partition element holding y; throws vacuum if the
//! element carries no atoms.
GvpValue gvp_reconstruct(const AtomicMeasure& p0, const StepFunction& u0, double t,
                         double y);

//! Times in (t1, t2] at which the cluster structure changes.
std::vector<double> clustering_changes(const AtomicMeasure& p0, const StepFunction& u0,
                                       double t1, double t2);

//! Compactly supported polynomial bump (1 - s^2)^4 with s = (x - center)/radius.
struct Bump {
  double center;
  double radius;

  double operator()(double x) const;
  double derivative(double x) const;
};

struct WeakResidual {
  double mass;
  double momentum;
};

/*!
  Residuals of the weak form for the reconstructed (P_t, I_t = u P_t):
  int f dP|_{t1}^{t2} - int int f' dI dtau and the analogue for I with
  integrand g' u dI. Time quadrature is exact on each collision-free piece.
*/
WeakResidual weak_solution_residual(const AtomicMeasure& p0, const StepFunction& u0,
                                    double t1, double t2, const Bump& f, const Bump& g);

}  // namespace conslaw::flowmap
