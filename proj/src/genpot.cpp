#include "conslaw/genpot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conslaw/error.hpp"

namespace conslaw::genpot {

namespace {

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, scale);
}

}  // namespace

GenPotData left_anchored(const GenPotData& data) {
  const auto& atoms = data.rho0.atoms();
  double lo = atoms.empty() ? data.base : std::min(data.base, atoms.front().location);
  return {data.rho0, data.u0, lo - 1.0};
}

double potential_F(const GenPotData& data, double y, double x, double t) {
  return stieltjes_integral(data.u0, data.m0(), y, x, t, data.base);
}

MinimizerSet minimize_F(const GenPotData& data, double x, double t) {
  if (!std::isfinite(x) || !std::isfinite(t) || t < 0.0) fail("minimize_F: bad (x, t)");
  const auto& atoms = data.rho0.atoms();
  const std::size_t n = atoms.size();
  StepFunction m0 = data.m0();

  // F is constant on I_k = (a_k, a_{k+1}], with a_0 = -inf and a_{n+1} = +inf.
  std::vector<double> alpha(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double probe = n == 0  ? data.base + 1.0
                   : k < n ? atoms[k].location
                           : atoms[n - 1].location + 1.0;
    alpha[k] = stieltjes_integral(data.u0, m0, probe, x, t, data.base);
  }
  double v = *std::min_element(alpha.begin(), alpha.end());
  double scale = 0.0;
  for (double a : alpha) scale = std::max(scale, std::abs(a));

  auto lo_of = [&](std::size_t k) { return k == 0 ? -kInf : atoms[k - 1].location; };
  auto hi_of = [&](std::size_t k) { return k == n ? kInf : atoms[k].location; };

  MinimizerSet s;
  s.v = v;
  std::size_t last = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (!close(alpha[k], v, scale)) continue;
    last = k;
    s.branches.push_back(k);
    if (!s.components.empty() && s.components.back().hi == lo_of(k)) {
      s.components.back().hi = hi_of(k);
      s.components.back().hi_closed = k < n;
    } else {
      s.components.push_back({lo_of(k), hi_of(k), k > 0, k < n});
    }
  }

  double lo = s.components.front().lo;
  double hi = s.components.back().hi;
  if (n > 0) {
    lo = std::max(lo, atoms.front().location);
    hi = std::min(hi, atoms.back().location);
  }
  s.y_star = lo;
  s.y_star_upper = hi;

  if (last == n) {
    s.attained_at_upper = true;
    s.right_limit_value = v;
  } else {
    double y0 = atoms[last].location;
    s.attained_at_upper = close(stieltjes_integral(data.u0, m0, y0, x, t, data.base), v, scale);
    s.right_limit_value = alpha[last + 1];
  }
  return s;
}

std::pair<Characteristic, Characteristic> backward_characteristics(double x0, double t0,
                                                                   const MinimizerSet& s) {
  if (!(t0 > 0.0)) fail("backward_characteristics: t0 must be positive");
  if (!std::isfinite(s.y_star) || !std::isfinite(s.y_star_upper))
    fail("backward_characteristics: minimizer set is unbounded");
  return {{x0, t0, s.y_star}, {x0, t0, s.y_star_upper}};
}

double entropy_check(const StepFunction& u, double t) {
  if (!(t > 0.0)) fail("entropy_check: t must be positive");
  const auto& b = u.breakpoints();
  double q = 0.0;
  for (std::size_t i = 1; i < b.size(); ++i) {
    q = std::max(q, (u(b[i]) - u(b[i - 1])) / (b[i] - b[i - 1]));
  }
  return q - 1.0 / t;
}

bool monotonicity_scan(const GenPotData& data, double t, const std::vector<double>& xs) {
  auto share = [](const MinimizerSet& a, const MinimizerSet& b) {
    for (std::size_t k : a.branches)
      if (std::find(b.branches.begin(), b.branches.end(), k) != b.branches.end()) return true;
    return false;
  };
  constexpr double tol = 1e-12;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) fail("monotonicity_scan: grid must increase");
    MinimizerSet a = minimize_F(data, xs[i - 1], t);
    MinimizerSet b = minimize_F(data, xs[i], t);
    if (a.y_star > b.y_star + tol) return false;
    if (a.y_star_upper > b.y_star_upper + tol) return false;
    if (a.y_star_upper > b.y_star + tol && !share(a, b)) return false;
  }
  return true;
}

std::vector<PlateauCluster> plateau_clusters(const GenPotData& data, double t) {
  const auto& atoms = data.rho0.atoms();
  const std::size_t n = atoms.size();
  std::vector<double> M(n + 1, 0.0), C(n + 1, 0.0), I(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double u = data.u0(atoms[j].location);
    M[j + 1] = M[j] + atoms[j].mass;
    C[j + 1] = C[j] + atoms[j].mass * (atoms[j].location + t * u);
    I[j + 1] = I[j] + atoms[j].mass * u;
  }
  std::vector<PlateauCluster> out;
  std::size_t k = 0;
  while (k < n) {
    std::size_t best = k + 1;
    double cross = (C[best] - C[k]) / (M[best] - M[k]);
    for (std::size_t j = k + 2; j <= n; ++j) {
      double c = (C[j] - C[k]) / (M[j] - M[k]);
      if (c <= cross + 1e-13 * std::max(1.0, std::abs(cross))) {
        best = j;
        cross = std::min(cross, c);
      }
    }
    double mass = M[best] - M[k];
    out.push_back({cross, k, best - 1, mass, (I[best] - I[k]) / mass});
    k = best;
  }
  return out;
}

StepFunction velocity_field(const std::vector<PlateauCluster>& clusters) {
  if (clusters.empty()) return StepFunction::constant(0.0);
  std::vector<double> br, vals;
  for (const PlateauCluster& c : clusters) {
    br.push_back(c.position);
    vals.push_back(c.velocity);
  }
  vals.push_back(clusters.back().velocity);
  return StepFunction(br, vals, Continuity::left);
}

}  // namespace conslaw::genpot
