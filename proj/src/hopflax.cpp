#include "conslaw/hopflax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conslaw/error.hpp"

namespace conslaw::hopflax {

StepFunction velocity_profile_a(const sticky::ParticleSystem& sys) {
  const auto& ps = sys.particles();
  if (ps.empty()) return StepFunction::constant(0.0);
  std::vector<double> breaks;
  std::vector<double> values;
  double cum = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    values.push_back(ps[i].velocity);
    cum += ps[i].mass;
    if (i + 1 < ps.size()) breaks.push_back(cum);
  }
  return StepFunction(std::move(breaks), std::move(values), Continuity::left);
}

PiecewiseLinear flux_A(const StepFunction& a, double total_mass) {
  if (!(total_mass >= 0.0)) fail("flux domain needs a nonnegative total mass");
  std::vector<Knot> knots{{0.0, 0.0}};
  double value = 0.0;
  double prev = 0.0;
  const auto& b = a.breakpoints();
  const auto& v = a.values();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0) || !(b[i] < total_mass)) continue;
    value += v[i] * (b[i] - prev);
    knots.push_back({b[i], value});
    prev = b[i];
  }
  if (total_mass > 0.0) {
    value += a.left_limit(total_mass) * (total_mass - prev);
    knots.push_back({total_mass, value});
  }
  return PiecewiseLinear(std::move(knots));
}

PiecewiseLinear potential_psi(const sticky::ParticleSystem& sys) {
  std::vector<Ramp> terms;
  for (const auto& p : sys.particles()) terms.push_back({p.mass, p.position});
  return positive_part_sum(terms);
}

PiecewiseLinear initial_phi(const sticky::ParticleSystem& sys) {
  return legendre_transform(potential_psi(sys));
}

PiecewiseLinear shifted_phi(const sticky::ParticleSystem& sys0, double t) {
  PiecewiseLinear phi = initial_phi(sys0);
  PiecewiseLinear a = flux_A(velocity_profile_a(sys0), sys0.total_mass());
  // Both functions have knots at the cumulative masses; merge the two knot
  // sets, snapping values that agree to rounding.
  std::vector<double> xs;
  for (const Knot& k : phi.knots()) xs.push_back(k.x);
  for (const Knot& k : a.knots()) xs.push_back(k.x);
  std::sort(xs.begin(), xs.end());
  double scale = std::max(1.0, std::abs(xs.back()));
  std::vector<double> uniq;
  for (double x : xs) {
    if (uniq.empty() || x - uniq.back() > 1e-14 * scale) uniq.push_back(x);
  }
  double lo = a.domain_lo();
  double hi = a.domain_hi();
  std::vector<Knot> knots;
  for (double x : uniq) {
    double xc = std::clamp(x, lo, hi);
    double pv = phi.defined_at(xc) ? phi(xc) : phi(std::clamp(xc, phi.domain_lo(), phi.domain_hi()));
    knots.push_back({xc, pv + t * a(xc)});
  }
  return PiecewiseLinear(std::move(knots));
}

HullDecomposition hull_positions(const sticky::ParticleSystem& sys0, double t) {
  if (t < 0.0) fail("hull time must be nonnegative");
  if (sys0.size() == 0) return {PiecewiseLinear::zero(), {}, {}};
  PiecewiseLinear a = flux_A(velocity_profile_a(sys0), sys0.total_mass());
  PiecewiseLinear hull = lower_convex_hull(shifted_phi(sys0, t));
  HullDecomposition out{hull, {}, {}};
  const auto& k = hull.knots();
  for (std::size_t i = 1; i < k.size(); ++i) {
    double dm = k[i].x - k[i - 1].x;
    out.clusters.push_back({k[i - 1].x, k[i].x, (k[i].value - k[i - 1].value) / dm,
                            (a(k[i].x) - a(k[i - 1].x)) / dm});
  }
  for (std::size_t i = 1; i < out.clusters.size(); ++i) {
    out.vacuum.push_back({out.clusters[i].m_lo, out.clusters[i - 1].position,
                          out.clusters[i].position});
  }
  return out;
}

ViscosityReport viscosity_certificate(const PiecewiseLinear& psi,
                                      const PiecewiseLinear& flux,
                                      const std::vector<double>& positions,
                                      int samples) {
  if (!psi.is_convex())
    throw Error(ErrorCode::non_convex, "viscosity certificate needs a convex potential");
  if (samples < 2) fail("viscosity certificate needs at least two samples");
  ViscosityReport report;
  for (double x : positions) {
    CertificatePoint cp{x, psi.left_derivative(x), psi.right_derivative(x), false, 0.0, true};
    double ml = std::clamp(cp.slope_left, flux.domain_lo(), flux.domain_hi());
    double mr = std::clamp(cp.slope_right, flux.domain_lo(), flux.domain_hi());
    cp.above_vacuous = cp.slope_left < cp.slope_right;
    double al = flux(ml);
    double ar = flux(mr);
    double worst = 0.0;
    if (mr > ml) {
      worst = std::numeric_limits<double>::infinity();
      for (int s = 0; s < samples; ++s) {
        double w = static_cast<double>(s) / (samples - 1);
        double p = ml + w * (mr - ml);
        double dphi_dt = al + w * (ar - al);
        worst = std::min(worst, flux(p) - dphi_dt);
      }
    }
    cp.min_margin = worst;
    cp.below_ok = worst >= -1e-12;
    report.passed = report.passed && cp.below_ok;
    report.points.push_back(cp);
  }
  return report;
}

}  // namespace conslaw::hopflax
