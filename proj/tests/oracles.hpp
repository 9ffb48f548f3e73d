#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace oracles {

// Classical RK4 on db/dt = -fpp b^2 from b(0) = b0.
inline double rk4_drift(double b0, double fpp, double t, std::size_t steps = 4000) {
  auto rhs = [fpp](double b) { return -fpp * b * b; };
  double b = b0;
  double h = t / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    double k1 = rhs(b);
    double k2 = rhs(b + 0.5 * h * k1);
    double k3 = rhs(b + 0.5 * h * k2);
    double k4 = rhs(b + h * k3);
    b += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return b;
}

// One shock from the upper to the lower state, started uniformly on [lo, hi]
// and moving at speed c. Probability that u(x-, t) is the upper state.
inline double riemann_p1_upper(double x, double t, double c, double lo, double hi) {
  return std::clamp((hi - (x - c * t)) / (hi - lo), 0.0, 1.0);
}

// Density of the shock position at x.
inline double riemann_p2_density(double x, double t, double c, double lo, double hi) {
  double y = x - c * t;
  return (y >= lo && y <= hi) ? 1.0 / (hi - lo) : 0.0;
}

// Same density averaged over [x, x + w).
inline double riemann_p2_window(double x, double w, double t, double c, double lo, double hi) {
  double a = std::max(x - c * t, lo);
  double b = std::min(x + w - c * t, hi);
  return b > a ? (b - a) / ((hi - lo) * w) : 0.0;
}

}  // namespace oracles
