#pragma once

#include <string>
#include <vector>

#include "conslaw/measures.hpp"

namespace conslaw {

struct ClusterRow {
  double mass;
  double position;
  double velocity;
};

//! Clusters at one time from each exact solver, in solver_names() order.
struct CrossCheckRow {
  double t;
  std::vector<std::vector<ClusterRow>> solvers;
  bool counts_agree;
  //! Max pairwise gap over solvers and clusters.
  double position_gap;
  double velocity_gap;
  double mass_gap;
};

struct CrossCheckReport {
  std::vector<CrossCheckRow> rows;
  bool counts_agree = true;
  double position_gap = 0.0;
  double velocity_gap = 0.0;
  double mass_gap = 0.0;
};

//! sticky, hopflax, flowmap, genpot.
const std::vector<std::string>& solver_names();

/*!
  Runs the sticky simulation, the Hopf-Lax hull, the flow-map GVP and the
  generalized-potential plateaus on atoms p0 with velocities u0(atom).
*/
CrossCheckReport crosscheck(const AtomicMeasure& p0, const StepFunction& u0,
                            const std::vector<double>& times);

}  // namespace conslaw
