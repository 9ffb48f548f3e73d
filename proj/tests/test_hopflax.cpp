#include <doctest.h>

#include <cmath>
#include <random>

#include "conslaw/error.hpp"
#include "conslaw/hopflax.hpp"
#include "fixtures.hpp"

using namespace conslaw;
using namespace conslaw::hopflax;

namespace {

constexpr double kTol = 1e-12;

// Branches of Phi0 + tA, one per mass interval.
double shifted_table(double m, double t) {
  if (m <= 0.25) return (-3.0 + 2.0 * t) * m;
  if (m <= 0.5) return (-2.0 + t) * m - (1.0 - t) / 4.0;
  if (m <= 5.0 / 6.0) return (1.0 - t / 2.0) * m - (7.0 - 4.0 * t) / 4.0;
  return (3.0 + t) * m - (41.0 + 3.0 * t) / 12.0;
}

}  // namespace

TEST_CASE("a(m) and A(m) for the four particles") {
  auto s = fixtures::four_particles();
  StepFunction a = velocity_profile_a(s);
  REQUIRE(a.breakpoints().size() == 3);
  CHECK(std::abs(a.breakpoints()[0] - 0.25) < kTol);
  CHECK(std::abs(a.breakpoints()[1] - 0.5) < kTol);
  CHECK(std::abs(a.breakpoints()[2] - 5.0 / 6.0) < kTol);
  CHECK(a(0.25) == 2.0);
  CHECK(a(0.3) == 1.0);
  CHECK(a(0.9) == 1.0);
  CHECK(a(0.6) == -0.5);

  PiecewiseLinear A = flux_A(a, s.total_mass());
  CHECK(A(0.0) == 0.0);
  CHECK(std::abs(A(0.25) - 0.5) < kTol);
  CHECK(std::abs(A(0.5) - 0.75) < kTol);
  CHECK(std::abs(A(5.0 / 6.0) - 7.0 / 12.0) < kTol);
  CHECK(std::abs(A(1.0) - 0.75) < kTol);
  // v1 m + sum (m - M_i)_+ (v_{i+1} - v_i)
  auto closed = [](double m) {
    return 2.0 * m + std::max(0.0, m - 0.25) * (1.0 - 2.0) +
           std::max(0.0, m - 0.5) * (-0.5 - 1.0) + std::max(0.0, m - 5.0 / 6.0) * (1.0 + 0.5);
  };
  CHECK(std::abs(A(0.6) - 0.7) < kTol);
  for (double m = 0.0; m <= 1.0; m += 1.0 / 128) CHECK(std::abs(A(m) - closed(m)) < kTol);

  CHECK(velocity_profile_a(sticky::ParticleSystem::from_arrays({2.0}, {0.0}, {3.0}))(1.7) == 3.0);
  auto pair = sticky::ParticleSystem::from_arrays({1.0, 1.0}, {0.0, 1.0}, {1.0, -1.0});
  CHECK(velocity_profile_a(pair).breakpoints() == std::vector<double>{1.0});
  PiecewiseLinear zero = flux_A(StepFunction::constant(0.0), 1.0);
  CHECK(zero(0.7) == 0.0);
}

TEST_CASE("shifted potential tables at t = 0, 1, 2") {
  auto s = fixtures::four_particles();
  for (double t : {0.0, 1.0, 2.0}) {
    PiecewiseLinear f = shifted_phi(s, t);
    for (const Knot& k : f.knots()) CHECK(std::abs(k.value - shifted_table(k.x, t)) < kTol);
    for (double m = 0.0; m <= 1.0; m += 1.0 / 96) CHECK(std::abs(f(m) - shifted_table(m, t)) < kTol);
  }
}

TEST_CASE("hull positions") {
  auto s = fixtures::four_particles();
  auto h0 = hull_positions(s, 0.0);
  REQUIRE(h0.clusters.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(h0.clusters[i].position - fixtures::kPos[i]) < kTol);
    CHECK(std::abs(h0.clusters[i].velocity - fixtures::kVel[i]) < kTol);
  }

  auto h1 = hull_positions(s, 1.0);
  PiecewiseLinear f1 = shifted_phi(s, 1.0);
  for (const Knot& k : f1.knots()) CHECK(std::abs(h1.hull(k.x) - k.value) < kTol);
  REQUIRE(h1.clusters.size() == 3);
  CHECK(std::abs(h1.clusters[0].position + 1.0) < kTol);
  CHECK(std::abs(h1.clusters[0].m_hi - 0.5) < kTol);

  auto h2 = hull_positions(s, 2.0);
  REQUIRE(h2.clusters.size() == 2);
  CHECK(std::abs(h2.clusters[0].m_hi - 5.0 / 6.0) < kTol);
  CHECK(std::abs(h2.hull(5.0 / 6.0) - 0.25) < kTol);
  CHECK(std::abs(h2.clusters[0].position - 0.3) < kTol);
  CHECK(std::abs(h2.clusters[1].position - 5.0) < kTol);
  CHECK(std::abs(h2.clusters[0].velocity - 0.7) < kTol);
  REQUIRE(h2.vacuum.size() == 1);
  CHECK(std::abs(h2.vacuum[0].x_lo - 0.3) < kTol);
  CHECK(std::abs(h2.vacuum[0].x_hi - 5.0) < kTol);
}

TEST_CASE("hull matches sticky positions on random systems") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 10;
    std::vector<double> m, x, v;
    double pos = 0.0;
    for (int i = 0; i < n; ++i) {
      m.push_back(0.1 + u(rng));
      x.push_back(pos);
      v.push_back(2.0 - 4.0 * u(rng));
      pos += 0.2 + u(rng);
    }
    auto s = sticky::ParticleSystem::from_arrays(m, x, v);
    double first = next_collision(s) ? next_collision(s)->time : INFINITY;
    for (double t : {0.3, 1.0, 2.5}) {
      auto st = sticky::evolve(s, t);
      auto h = hull_positions(s, t);
      REQUIRE(h.clusters.size() == st.size());
      double cum = 0.0;
      for (std::size_t i = 0; i < st.size(); ++i) {
        cum += st.particles()[i].mass;
        CHECK(std::abs(h.clusters[i].m_hi - cum) < 1e-12);
        CHECK(std::abs(h.clusters[i].position - st.particles()[i].position) < 1e-10);
        CHECK(std::abs(h.clusters[i].velocity - st.particles()[i].velocity) < 1e-10);
      }
      // Psi slope equals cumulative mass away from atoms.
      PiecewiseLinear psi = potential_psi(st);
      PiecewiseLinear from_hull = legendre_transform(h.hull);
      for (double xx = -3.0; xx < 12.0; xx += 0.173) {
        CHECK(std::abs(psi(xx) - from_hull(xx)) < 1e-10);
      }
      if (t < first) {
        PiecewiseLinear f = shifted_phi(s, t);
        CHECK(h.hull.knots().size() == f.knots().size());
      }
      CHECK(h.hull.is_convex());
    }
  }
}

TEST_CASE("potential psi") {
  auto s = fixtures::four_particles();
  PiecewiseLinear psi0 = potential_psi(s);
  CHECK(psi0.left_derivative(-2.0) == doctest::Approx(0.25));
  CHECK(psi0.right_derivative(-2.0) == doctest::Approx(0.5));
  PiecewiseLinear psi2 = potential_psi(sticky::evolve(s, 2.0));
  REQUIRE(psi2.knots().size() == 2);
  CHECK(std::abs(psi2.knots()[0].x - 0.3) < kTol);
  double xc = psi2.knots()[0].x;
  double xr = psi2.knots()[1].x;
  CHECK(std::abs(psi2.right_derivative(xc) - psi2.left_derivative(xc) - 5.0 / 6.0) < kTol);
  CHECK(std::abs(psi2.right_derivative(xr) - psi2.left_derivative(xr) - 1.0 / 6.0) < kTol);
  PiecewiseLinear empty = potential_psi(sticky::ParticleSystem({}));
  CHECK(empty(4.0) == 0.0);
}

TEST_CASE("viscosity certificate") {
  auto s = fixtures::four_particles();
  PiecewiseLinear A = flux_A(velocity_profile_a(s), s.total_mass());
  auto r0 = viscosity_certificate(potential_psi(s), A, fixtures::kPos);
  CHECK(r0.passed);
  CHECK(r0.points[1].slope_left == doctest::Approx(0.25));
  CHECK(r0.points[1].slope_right == doctest::Approx(0.5));
  CHECK(r0.points[1].above_vacuous);

  auto st = sticky::evolve(s, 2.0);
  auto r2 = viscosity_certificate(potential_psi(st), A,
                                  {st.particles()[0].position, 2.0, st.particles()[1].position});
  CHECK(r2.passed);
  CHECK(std::abs(r2.points[0].slope_left) < kTol);
  CHECK(std::abs(r2.points[0].slope_right - 5.0 / 6.0) < kTol);
  CHECK(r2.points[0].min_margin >= 0.0);
  CHECK_FALSE(r2.points[1].above_vacuous);
  CHECK(r2.points[1].min_margin == 0.0);

  PiecewiseLinear bad({{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}});
  CHECK_THROWS_AS(viscosity_certificate(bad, A, {1.0}), Error);
}
