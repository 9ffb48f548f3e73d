#include "conslaw/randstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conslaw/error.hpp"

namespace conslaw::randstats {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool finite(double x) { return std::isfinite(x); }

std::size_t draw(std::mt19937_64& rng, const std::vector<double>& weights) {
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return i;
  }
  // r can exceed the rounded row sum; fall back to the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return weights.size() - 1;
}

void check_distribution(const std::vector<double>& w, const char* what) {
  double sum = 0.0;
  for (double p : w) {
    if (!(p >= 0.0) || !finite(p)) fail(std::string(what) + ": negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(std::string(what) + ": probabilities must sum to 1");
}

StepFunction from_changes(const std::vector<double>& xs, const std::vector<double>& vals,
                          double first) {
  std::vector<double> br;
  std::vector<double> v{first};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (vals[i] == v.back()) continue;
    if (!br.empty() && xs[i] <= br.back()) {
      v.back() = vals[i];
      if (v.size() >= 2 && v[v.size() - 2] == v.back()) {
        v.pop_back();
        br.pop_back();
      }
      continue;
    }
    br.push_back(xs[i]);
    v.push_back(vals[i]);
  }
  return StepFunction(br, v, Continuity::right);
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
  return mix(mix(seed) + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

void validate(const InitialLaw& law) {
  std::visit(
      [](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Riemann>) {
          if (!finite(l.u_l) || !finite(l.u_r) || !finite(l.lo) || !(l.hi >= l.lo) || !finite(l.hi))
            fail("Riemann: bad parameters");
        } else if constexpr (std::is_same_v<L, MarkovChain>) {
          std::size_t m = l.states.size();
          if (m == 0) fail("MarkovChain: no states");
          for (std::size_t i = 1; i < m; ++i)
            if (!(l.states[i] > l.states[i - 1])) fail("MarkovChain: states must increase");
          if (l.transition.size() != m) fail("MarkovChain: transition matrix must be square");
          for (const auto& row : l.transition) {
            if (row.size() != m) fail("MarkovChain: transition matrix must be square");
            check_distribution(row, "MarkovChain transition row");
          }
          if (!l.initial.empty()) {
            if (l.initial.size() != m) fail("MarkovChain: initial law has the wrong size");
            check_distribution(l.initial, "MarkovChain initial law");
          }
          if (!(l.rate > 0.0) || !finite(l.rate)) fail("MarkovChain: rate must be positive");
          if (!(l.hi > l.lo) || !finite(l.lo) || !finite(l.hi)) fail("MarkovChain: empty domain");
        } else if constexpr (std::is_same_v<L, SpectrallyNegative>) {
          if (!finite(l.start) || !finite(l.drift)) fail("SpectrallyNegative: bad start or drift");
          if (!(l.jump_rate >= 0.0) || !finite(l.jump_rate)) fail("SpectrallyNegative: bad jump rate");
          if (!(l.jump_mean > 0.0) || !finite(l.jump_mean)) fail("SpectrallyNegative: bad jump mean");
          if (!(l.hi > l.lo) || !finite(l.lo) || !finite(l.hi)) fail("SpectrallyNegative: empty domain");
          if (l.grid.empty()) fail("SpectrallyNegative: empty state grid");
          for (std::size_t i = 1; i < l.grid.size(); ++i)
            if (!(l.grid[i] > l.grid[i - 1])) fail("SpectrallyNegative: grid must increase");
        } else if constexpr (std::is_same_v<L, BrownianPotential>) {
          if (!(l.variance >= 0.0) || !finite(l.variance)) fail("BrownianPotential: bad variance");
          if (!(l.step > 0.0) || !finite(l.step)) fail("BrownianPotential: bad step");
          if (!(l.hi - l.lo >= l.step) || !finite(l.lo) || !finite(l.hi))
            fail("BrownianPotential: domain shorter than one step");
        } else {
          if (!finite(l.u_left) || !finite(l.u_mid) || !finite(l.u_right)) fail("TwoShock: bad states");
          if (!(l.a_hi >= l.a_lo) || !finite(l.a_lo) || !finite(l.a_hi)) fail("TwoShock: bad location range");
          if (!(l.g_lo > 0.0) || !(l.g_hi >= l.g_lo) || !finite(l.g_hi)) fail("TwoShock: bad gap range");
        }
      },
      law);
}

StepFunction sample_initial(const InitialLaw& law, std::uint64_t seed) {
  validate(law);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::visit(
      [&](const auto& l) -> StepFunction {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Riemann>) {
          double x = l.hi > l.lo ? l.lo + (l.hi - l.lo) * unit(rng) : l.lo;
          if (l.u_l == l.u_r) return StepFunction::constant(l.u_l);
          return StepFunction({x}, {l.u_l, l.u_r}, Continuity::right);
        } else if constexpr (std::is_same_v<L, MarkovChain>) {
          std::vector<double> init = l.initial;
          if (init.empty()) init.assign(l.states.size(), 1.0 / static_cast<double>(l.states.size()));
          std::size_t s = draw(rng, init);
          double first = l.states[s];
          std::exponential_distribution<double> hold(l.rate);
          std::vector<double> xs, vals;
          for (double x = l.lo + hold(rng); x < l.hi; x += hold(rng)) {
            s = draw(rng, l.transition[s]);
            xs.push_back(x);
            vals.push_back(l.states[s]);
          }
          return from_changes(xs, vals, first);
        } else if constexpr (std::is_same_v<L, SpectrallyNegative>) {
          return sample_spectral_path(l, seed).snap(l.grid);
        } else if constexpr (std::is_same_v<L, BrownianPotential>) {
          PiecewiseLinear psi = sample_potential(l, seed);
          std::vector<double> s = psi.slopes();
          std::vector<double> br, vals;
          for (std::size_t i = 1; i + 1 < psi.knots().size(); ++i) br.push_back(psi.knots()[i].x);
          for (double v : s) vals.push_back(-v);
          return StepFunction(br, vals, Continuity::right);
        } else {
          double a = l.a_lo + (l.a_hi - l.a_lo) * unit(rng);
          double g = l.g_lo + (l.g_hi - l.g_lo) * unit(rng);
          return StepFunction({a, a + g}, {l.u_left, l.u_mid, l.u_right}, Continuity::right);
        }
      },
      law);
}

double SpectralPath::operator()(double x) const {
  double xc = std::clamp(x, lo, hi);
  double v = start + drift * (xc - lo);
  for (const DownJump& j : jumps) {
    if (j.x > xc) break;
    v -= j.size;
  }
  return v;
}

StepFunction SpectralPath::snap(const std::vector<double>& grid) const {
  if (grid.empty()) fail("SpectralPath::snap: empty grid");
  auto level = [&](double v) {
    auto it = std::upper_bound(grid.begin(), grid.end(), v);
    return it == grid.begin() ? grid.front() : *(it - 1);
  };
  std::vector<double> xs, vals;
  double xa = lo;
  double va = start;
  auto sweep = [&](double xb) {
    // Level crossings of the drift on [xa, xb).
    if (drift > 0.0) {
      for (double g : grid) {
        double x = xa + (g - va) / drift;
        if (g > va && x < xb) {
          xs.push_back(x);
          vals.push_back(level(g));
        }
      }
    } else if (drift < 0.0) {
      for (std::size_t k = grid.size(); k-- > 0;) {
        double g = grid[k];
        double x = xa + (g - va) / drift;
        if (g <= va && x >= xa && x < xb) {
          xs.push_back(x);
          vals.push_back(k == 0 ? grid.front() : grid[k - 1]);
        }
      }
    }
  };
  for (const DownJump& j : jumps) {
    sweep(j.x);
    va += drift * (j.x - xa) - j.size;
    xa = j.x;
    xs.push_back(xa);
    vals.push_back(level(va));
  }
  sweep(hi);
  return from_changes(xs, vals, level(start));
}

SpectralPath sample_spectral_path(const SpectrallyNegative& law, std::uint64_t seed) {
  validate(law);
  std::mt19937_64 rng(seed);
  SpectralPath p{law.lo, law.hi, law.start, law.drift, {}};
  if (law.jump_rate == 0.0) return p;
  std::exponential_distribution<double> gap(law.jump_rate);
  std::exponential_distribution<double> size(1.0 / law.jump_mean);
  for (double x = law.lo + gap(rng); x < law.hi; x += gap(rng)) p.jumps.push_back({x, size(rng)});
  return p;
}

PiecewiseLinear sample_potential(const BrownianPotential& law, std::uint64_t seed) {
  validate(law);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto n = static_cast<std::size_t>(std::floor((law.hi - law.lo) / law.step + 1e-9));
  double sd = std::sqrt(law.variance * law.step);
  std::vector<Knot> knots;
  knots.reserve(n + 1);
  double psi = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    knots.push_back({law.lo + static_cast<double>(k) * law.step, psi});
    psi += sd * normal(rng);
  }
  return PiecewiseLinear(knots);
}

std::vector<double> drift_evolution(const std::function<double(double)>& b0,
                                    const std::function<double(double)>& fpp, double t,
                                    const std::vector<double>& ys) {
  if (!(t >= 0.0) || !finite(t)) fail("drift_evolution: t must be nonnegative");
  std::vector<double> out;
  out.reserve(ys.size());
  double critical = std::numeric_limits<double>::infinity();
  for (double y : ys) {
    double b = b0(y);
    double k = fpp(y) * b;
    double den = 1.0 + t * k;
    if (!(den > 0.0)) critical = std::min(critical, -1.0 / k);
    out.push_back(b / den);
  }
  if (std::isfinite(critical)) throw BlowupError(critical, "drift_evolution: drift blows up");
  return out;
}

double drift_evolution(double b0, double fpp, double t) {
  return drift_evolution([b0](double) { return b0; }, [fpp](double) { return fpp; }, t, {0.0})[0];
}

std::pair<double, double> coalescence_velocities(const std::function<double(double)>& f,
                                                 const std::function<double(double)>& fprime,
                                                 double y, double z, double by, double bz) {
  if (y == z) fail("coalescence_velocities: y and z must differ");
  double chord = (f(y) - f(z)) / (y - z);
  return {(chord - fprime(y)) * by, (chord - fprime(z)) * bz};
}

Contact parabola_contacts(const PiecewiseLinear& psi, double x, double t) {
  if (!(t > 0.0) || !finite(x)) fail("parabola_contacts: need t > 0 and finite x");
  const auto& k = psi.knots();
  auto F = [&](double y, double p) { return (x - y) * (x - y) / (2.0 * t) - p; };
  struct Cand {
    double y;
    double f;
  };
  std::vector<Cand> c;
  c.reserve(2 * k.size() + 2);
  if (psi.left_tail()) {
    double s = *psi.left_tail();
    double y = x + s * t;
    if (y < k.front().x) c.push_back({y, F(y, k.front().value + s * (y - k.front().x))});
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    c.push_back({k[i].x, F(k[i].x, k[i].value)});
    if (i + 1 < k.size()) {
      double s = (k[i + 1].value - k[i].value) / (k[i + 1].x - k[i].x);
      double y = x + s * t;
      if (y > k[i].x && y < k[i + 1].x) c.push_back({y, F(y, k[i].value + s * (y - k[i].x))});
    }
  }
  if (psi.right_tail()) {
    double s = *psi.right_tail();
    double y = x + s * t;
    if (y > k.back().x) c.push_back({y, F(y, k.back().value + s * (y - k.back().x))});
  }
  double v = std::numeric_limits<double>::infinity();
  for (const Cand& q : c) v = std::min(v, q.f);
  double tol = 1e-12 * (1.0 + std::abs(v) + x * x / (2.0 * t));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Cand& q : c) {
    if (q.f <= v + tol) {
      lo = std::min(lo, q.y);
      hi = std::max(hi, q.y);
    }
  }
  if ((!psi.left_tail() && lo == k.front().x) || (!psi.right_tail() && hi == k.back().x))
    throw Error(ErrorCode::domain_too_small, "parabola_contacts: minimizer on the domain boundary");
  // A knot within rounding of a stationary point is the same contact.
  if (hi - lo <= 1e-9 * std::max(1.0, std::abs(x))) hi = lo;
  Contact out;
  out.shock = hi > lo;
  out.xi_minus = lo;
  out.xi_plus = hi;
  out.u = (x - lo) / t;
  out.sample = {x, lo, hi, hi - lo, x - lo};
  return out;
}

std::vector<ShockSample> find_shocks(const PiecewiseLinear& psi, double t, double lo, double hi,
                                     double step) {
  if (!(step > 0.0) || !(hi > lo)) fail("find_shocks: bad scan range");
  std::vector<ShockSample> out;
  // Bisection on the least minimizer only: at a shock it takes the left
  // branch, so the jump always stays in the right half of a split.
  auto excess = [](double a, double b, double xa, double xb) {
    return xb - xa - (b - a) > 1e-12 * std::max(1.0, std::abs(b));
  };
  struct Node {
    double a, b;
    Contact ca, cb;
  };
  auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  Contact prev = parabola_contacts(psi, lo, t);
  for (std::size_t i = 1; i <= n; ++i) {
    double a = lo + static_cast<double>(i - 1) * step;
    double b = std::min(hi, lo + static_cast<double>(i) * step);
    Contact cb = parabola_contacts(psi, b, t);
    std::vector<Node> stack{{a, b, prev, cb}};
    while (!stack.empty()) {
      Node nd = stack.back();
      stack.pop_back();
      if (!excess(nd.a, nd.b, nd.ca.xi_minus, nd.cb.xi_minus)) continue;
      double m = 0.5 * (nd.a + nd.b);
      if (nd.b - nd.a <= 1e-13 * std::max(1.0, std::abs(m)) || m <= nd.a || m >= nd.b) {
        // A shock at a is reported with its own contact set.
        double xm = nd.ca.shock ? nd.ca.xi_minus : nd.ca.xi_plus;
        double xp = nd.cb.shock ? nd.cb.xi_plus : nd.cb.xi_minus;
        double x = nd.ca.shock ? nd.a : (nd.cb.shock ? nd.b : m);
        // Ties are only resolved to a tolerance; one Newton step on
        // F(xm) - F(xp), whose x-derivative is (xp - xm) / t, pins x.
        auto F = [&](double y) { return (x - y) * (x - y) / (2.0 * t) - psi(y); };
        if (xp > xm) x -= (F(xm) - F(xp)) * t / (xp - xm);
        out.push_back({x, xm, xp, xp - xm, x - xm});
        continue;
      }
      Contact cm = parabola_contacts(psi, m, t);
      stack.push_back({m, nd.b, cm, nd.cb});
      stack.push_back({nd.a, m, nd.ca, cm});
    }
    prev = cb;
  }
  return out;
}

Histogram histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) fail("histogram: bad bins");
  Histogram h;
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < lo) {
      ++h.below;
    } else if (v >= hi) {
      ++h.above;
    } else {
      auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      ++h.counts[std::min(b, bins - 1)];
    }
  }
  return h;
}

}  // namespace conslaw::randstats
