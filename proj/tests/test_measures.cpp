#include <doctest.h>

#include <cmath>
#include <random>

#include "conslaw/error.hpp"
#include "conslaw/measures.hpp"
#include "fixtures.hpp"

using namespace conslaw;

namespace {

constexpr double kTol = 1e-12;

// Psi0 for the four particles, branch by branch.
double psi_table(double x) {
  const auto& m = fixtures::kMass;
  const auto& p = fixtures::kPos;
  double M1 = m[0], M2 = m[0] + m[1], M3 = M2 + m[2], M4 = M3 + m[3];
  if (x < p[0]) return 0.0;
  if (x < p[1]) return M1 * (x - p[0]);
  if (x < p[2]) return M1 * (p[1] - p[0]) + M2 * (x - p[1]);
  if (x < p[3]) return M1 * (p[1] - p[0]) + M2 * (p[2] - p[1]) + M3 * (x - p[2]);
  return M1 * (p[1] - p[0]) + M2 * (p[2] - p[1]) + M3 * (p[3] - p[2]) + M4 * (x - p[3]);
}

PiecewiseLinear four_psi() {
  std::vector<Ramp> terms;
  for (std::size_t i = 0; i < 4; ++i) terms.push_back({fixtures::kMass[i], fixtures::kPos[i]});
  return positive_part_sum(terms);
}

// Brute-force sup over a dense grid plus all knots.
double brute_conjugate(const PiecewiseLinear& f, double m) {
  double best = -INFINITY;
  for (const Knot& k : f.knots()) best = std::max(best, k.x * m - k.value);
  return best;
}

PiecewiseLinear random_convex(std::mt19937_64& rng, bool tails) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  int n = 2 + static_cast<int>(rng() % 6);
  std::vector<Knot> knots;
  double x = -2.0, v = 0.0, s = -1.0;
  for (int i = 0; i < n; ++i) {
    knots.push_back({x, v});
    double dx = u(rng);
    s += u(rng);
    x += dx;
    v += s * dx;
  }
  if (!tails) return PiecewiseLinear(knots);
  return PiecewiseLinear(knots, -1.5, s + 0.5);
}

}  // namespace

TEST_CASE("atomic measure validation") {
  CHECK_THROWS_AS(AtomicMeasure({{0.0, 1.0}, {0.0, 1.0}}), Error);
  CHECK_THROWS_AS(AtomicMeasure({{0.0, 0.0}}), Error);
  CHECK_THROWS_AS(AtomicMeasure({{1.0, 1.0}, {0.0, 1.0}}), Error);
  AtomicMeasure m = fixtures::four_measure();
  CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.mass_between(-3.0, 1.0, true, false) == doctest::Approx(0.5));
  CHECK(m.mass_between(-3.0, 1.0, false, true) == doctest::Approx(0.25 + 1.0 / 3.0));
}

TEST_CASE("step function continuity side") {
  StepFunction left({0.0, 1.0}, {1.0, 2.0, 3.0}, Continuity::left);
  StepFunction right({0.0, 1.0}, {1.0, 2.0, 3.0}, Continuity::right);
  for (double b : {0.0, 1.0}) {
    CHECK(left(b) == left(b - 1e-9));
    CHECK(right(b) == right(b + 1e-9));
    CHECK(left(b) != left(b + 1e-9));
    CHECK(right(b) != right(b - 1e-9));
  }
  CHECK(left(-5.0) == 1.0);
  CHECK(right(5.0) == 3.0);
  CHECK_THROWS_AS(StepFunction({1.0, 0.0}, {1.0, 2.0, 3.0}, Continuity::left), Error);
  CHECK_THROWS_AS(StepFunction({0.0}, {1.0}, Continuity::left), Error);
}

TEST_CASE("positive part sum") {
  PiecewiseLinear psi = four_psi();
  for (double x = -5.0; x <= 6.0; x += 0.0625) {
    CHECK(std::abs(psi(x) - psi_table(x)) < kTol);
  }
  PiecewiseLinear z = positive_part_sum({});
  CHECK(z(-3.0) == 0.0);
  CHECK(z(7.0) == 0.0);
  PiecewiseLinear ramp = positive_part_sum({{1.0, 0.0}});
  CHECK(ramp.left_derivative(0.0) == 0.0);
  CHECK(ramp.right_derivative(0.0) == 1.0);
  CHECK(ramp(-2.0) == 0.0);
  CHECK(ramp(2.5) == 2.5);
}

TEST_CASE("legendre transform of the four-particle potential") {
  PiecewiseLinear phi = legendre_transform(four_psi());
  const auto& m = fixtures::kMass;
  const auto& x = fixtures::kPos;
  auto closed_form = [&](double mm) {
    double v = x[0] * mm;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < 4; ++i) {
      cum += m[i];
      v += std::max(0.0, mm - cum) * (x[i + 1] - x[i]);
    }
    return v;
  };
  CHECK(phi.domain_lo() == 0.0);
  CHECK(std::abs(phi.domain_hi() - 1.0) < kTol);
  for (double mm = 0.0; mm <= 1.0; mm += 1.0 / 64) {
    CHECK(std::abs(phi(mm) - closed_form(mm)) < kTol);
  }
  PiecewiseLinear back = legendre_transform(phi);
  PiecewiseLinear psi = four_psi();
  for (const Knot& k : psi.knots()) {
    CHECK(std::abs(back(k.x) - k.value) < kTol);
  }
}

TEST_CASE("legendre of a flat segment collapses to its slope") {
  PiecewiseLinear flat({{0.0, 0.0}, {1.0, 0.0}});
  PiecewiseLinear phi = legendre_transform(flat);
  REQUIRE(phi.knots().size() == 1);
  CHECK(phi.knots()[0].x == 0.0);
  CHECK(phi.knots()[0].value == 0.0);
  CHECK(phi.right_tail().value() == 1.0);
  CHECK(phi.left_tail().value() == 0.0);
}

TEST_CASE("legendre rejects non-convex input") {
  PiecewiseLinear f({{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}});
  CHECK_THROWS_AS(legendre_transform(f), Error);
}

TEST_CASE("legendre involution and brute-force agreement on random convex data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    PiecewiseLinear f = random_convex(rng, trial % 2 == 0);
    PiecewiseLinear g = legendre_transform(f);
    PiecewiseLinear ff = legendre_transform(g);
    for (const Knot& k : f.knots()) CHECK(std::abs(ff(k.x) - k.value) < kTol);
    if (!f.left_tail() && !f.right_tail()) {
      for (double m = -3.0; m <= 6.0; m += 0.37) {
        CHECK(std::abs(g(m) - brute_conjugate(f, m)) < 1e-11);
      }
    }
  }
}

TEST_CASE("lower convex hull") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng() % 10);
    std::vector<Knot> knots;
    for (int i = 0; i < n; ++i) knots.push_back({i + 0.3 * u(rng), u(rng)});
    PiecewiseLinear f(knots);
    PiecewiseLinear h = lower_convex_hull(f);
    CHECK(h.is_convex());
    for (const Knot& k : knots) CHECK(h(k.x) <= k.value + kTol);
    CHECK(h(knots.front().x) == knots.front().value);
    CHECK(h(knots.back().x) == knots.back().value);
    // Knot subset of the input.
    for (const Knot& k : h.knots()) {
      bool found = false;
      for (const Knot& q : knots) found = found || (q.x == k.x && q.value == k.value);
      CHECK(found);
    }
    // Idempotence: same knots, same values.
    PiecewiseLinear hh = lower_convex_hull(h);
    REQUIRE(hh.knots().size() == h.knots().size());
    for (std::size_t i = 0; i < h.knots().size(); ++i) {
      CHECK(hh.knots()[i].x == h.knots()[i].x);
      CHECK(hh.knots()[i].value == h.knots()[i].value);
    }
    // Greatest convex minorant: every hull knot is attained, so no convex
    // function below f can exceed the hull at a hull knot.
  }
  PiecewiseLinear convex({{0.0, 1.0}, {1.0, 0.0}, {2.0, 0.5}, {3.0, 2.0}});
  PiecewiseLinear h = lower_convex_hull(convex);
  CHECK(h.knots().size() == 4);
}

TEST_CASE("hull with tails") {
  PiecewiseLinear f({{0.0, 0.0}, {1.0, -2.0}, {2.0, 0.0}}, -1.0, 1.0);
  PiecewiseLinear h = lower_convex_hull(f);
  REQUIRE(h.knots().size() == 1);
  CHECK(h.knots()[0].x == 1.0);
  CHECK(h(-4.0) == doctest::Approx(3.0));
  CHECK(h(5.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lower_convex_hull(PiecewiseLinear({{0.0, 0.0}}, 1.0, -1.0)), Error);
}

TEST_CASE("cumulative mass with origin convention") {
  StepFunction m0 = cumulative_mass(fixtures::four_measure());
  CHECK(std::abs(m0(-4.0) + 0.5) < kTol);
  CHECK(std::abs(m0(-3.0) + 0.25) < kTol);
  CHECK(std::abs(m0(-2.5) + 0.25) < kTol);
  CHECK(std::abs(m0(-2.0)) < kTol);
  CHECK(std::abs(m0(0.5)) < kTol);
  CHECK(std::abs(m0(1.0) - 1.0 / 3.0) < kTol);
  CHECK(std::abs(m0(3.5) - 0.5) < kTol);
  AtomicMeasure back = jump_measure(m0);
  REQUIRE(back.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.atoms()[i].location == fixtures::kPos[i]);
    CHECK(std::abs(back.atoms()[i].mass - fixtures::kMass[i]) < kTol);
  }
}

TEST_CASE("stieltjes integral table at x=0, t=1") {
  StepFunction m0 = cumulative_mass(fixtures::four_measure());
  StepFunction u0 = fixtures::four_u0();
  CHECK(std::abs(stieltjes_integral(u0, m0, -4.0, 0.0, 1.0) + 0.5) < kTol);
  CHECK(std::abs(stieltjes_integral(u0, m0, -2.5, 0.0, 1.0) + 0.25) < kTol);
  CHECK(std::abs(stieltjes_integral(u0, m0, 0.5, 0.0, 1.0)) < kTol);
  CHECK(std::abs(stieltjes_integral(u0, m0, 2.0, 0.0, 1.0) - 1.0 / 6.0) < kTol);
  CHECK(std::abs(stieltjes_integral(u0, m0, 4.0, 0.0, 1.0) - 5.0 / 6.0) < kTol);
  CHECK(stieltjes_integral(u0, m0, 0.0, 3.0, 2.0) == 0.0);
}

TEST_CASE("stieltjes integral is additive and homogeneous") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Atom> all, even, odd;
    std::vector<double> br, vals{0.0};
    for (int i = 0; i < 8; ++i) {
      Atom a{-4.0 + i + 0.4 * u(rng), 0.5 + 0.4 * u(rng)};
      all.push_back(a);
      (i % 2 ? odd : even).push_back(a);
      br.push_back(a.location);
      vals.push_back(u(rng));
    }
    StepFunction u0(br, vals, Continuity::right);
    double y = 4.0 * u(rng), x = u(rng), t = 1.0 + u(rng);
    double whole = stieltjes_integral(u0, cumulative_mass(AtomicMeasure(all)), y, x, t);
    double parts = stieltjes_integral(u0, cumulative_mass(AtomicMeasure(even)), y, x, t) +
                   stieltjes_integral(u0, cumulative_mass(AtomicMeasure(odd)), y, x, t);
    CHECK(std::abs(whole - parts) < kTol);
    std::vector<Atom> scaled = all;
    for (auto& a : scaled) a.mass *= 2.5;
    double s = stieltjes_integral(u0, cumulative_mass(AtomicMeasure(scaled)), y, x, t);
    CHECK(std::abs(s - 2.5 * whole) < kTol);
  }
}
