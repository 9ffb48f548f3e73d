#pragma once

#include <vector>

#include "conslaw/measures.hpp"
#include "conslaw/sticky.hpp"

namespace conslaw::hopflax {

//! a(m) = v_i on (M_{i-1}, M_i], left-continuous in the mass coordinate.
StepFunction velocity_profile_a(const sticky::ParticleSystem& sys);

//! A(m) = integral of a over [0, m] on [0, total_mass].
PiecewiseLinear flux_A(const StepFunction& a, double total_mass);

//! Psi(x) = sum m_i (x - x_i)_+, whose slope is the cumulative mass.
PiecewiseLinear potential_psi(const sticky::ParticleSystem& sys);

//! Phi0, the conjugate of the initial potential.
PiecewiseLinear initial_phi(const sticky::ParticleSystem& sys);

//! Phi0 + t A on [0, total mass].
PiecewiseLinear shifted_phi(const sticky::ParticleSystem& sys0, double t);

//! A maximal linear piece of the hull: one cluster.
struct ClusterPiece {
  double m_lo;
  double m_hi;
  double position;
  double velocity;
};

//! Hull vertex between two clusters; the x-range it spans carries no mass.
struct VacuumGap {
  double mass;
  double x_lo;
  double x_hi;
};

struct HullDecomposition {
  PiecewiseLinear hull;
  std::vector<ClusterPiece> clusters;
  std::vector<VacuumGap> vacuum;
};

HullDecomposition hull_positions(const sticky::ParticleSystem& sys0, double t);

struct CertificatePoint {
  double x;
  double slope_left;
  double slope_right;
  //! Strict kink: no smooth function touches from above.
  bool above_vacuous;
  //! Smallest A(p) - dPhi/dt(p) over the sampled slopes p.
  double min_margin;
  bool below_ok;
};

struct ViscosityReport {
  std::vector<CertificatePoint> points;
  bool passed = true;
};

/*!
  Samples the touching-from-below condition over the subdifferential of psi
  at each given position. The time derivative of Phi along a hull piece is
  the chord of A across that piece.
*/
ViscosityReport viscosity_certificate(const PiecewiseLinear& psi,
                                      const PiecewiseLinear& flux,
                                      const std::vector<double>& positions,
                                      int samples = 64);

}  // namespace conslaw::hopflax
