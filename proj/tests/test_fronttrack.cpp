#include <doctest.h>

#include <cmath>
#include <random>

#include "conslaw/error.hpp"
#include "conslaw/fronttrack.hpp"
#include "conslaw/genpot.hpp"

using namespace conslaw;
using namespace conslaw::fronttrack;

namespace {

FluxTable burgers(std::size_t m) {
  std::vector<double> s;
  for (std::size_t k = 0; k < m; ++k) s.push_back(static_cast<double>(k));
  return sample_flux(s, [](double u) { return 0.5 * u * u; });
}

// Random block data on a Burgers table, breaks a unit apart on average.
FrontList random_blocks(std::mt19937_64& rng, const FluxTable& flux, int blocks) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> s(0, flux.size() - 1);
  std::vector<double> br;
  std::vector<std::size_t> st{s(rng)};
  double x = -static_cast<double>(blocks) / 2.0;
  for (int i = 1; i < blocks; ++i) {
    x += 0.05 + u(rng);
    br.push_back(x);
    std::size_t next = s(rng);
    while (next == st.back()) next = s(rng);
    st.push_back(next);
  }
  return from_blocks(flux, br, st);
}

void check_chain(const FrontList& fl) {
  std::size_t state = fl.far_left;
  for (std::size_t i = 0; i < fl.fronts.size(); ++i) {
    CHECK(fl.fronts[i].left == state);
    state = fl.fronts[i].right;
    if (i > 0) CHECK(fl.fronts[i].position >= fl.fronts[i - 1].position);
  }
}

}  // namespace

TEST_CASE("flux table") {
  FluxTable f({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0});
  CHECK(f.slopes() == std::vector<double>{0.0, 1.0});
  CHECK(f.is_convex());
  CHECK(f.index_of(2.0) == 2);
  CHECK_THROWS_AS(f.index_of(0.5), Error);
  CHECK_THROWS_AS(f.speed(1, 1), Error);
  CHECK(f.speed(2, 0) == 0.5);
  CHECK_FALSE(FluxTable({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0}).is_convex());
  CHECK_THROWS_AS(FluxTable({0.0, 0.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(FluxTable({0.0}, {}), Error);
}

TEST_CASE("riemann solutions") {
  FluxTable two({0.0, 1.0}, {0.0, 0.5});
  auto shock = riemann_solve(two, 1, 0);
  REQUIRE(shock.size() == 1);
  CHECK(shock[0].speed == 0.5);
  CHECK(riemann_solve(two, 1, 1).empty());

  FluxTable three({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0});
  auto fan = riemann_solve(three, 0, 2, 0.7);
  REQUIRE(fan.size() == 2);
  CHECK(fan[0].speed == 0.0);
  CHECK(fan[1].speed == 1.0);
  CHECK(fan[0].right == fan[1].left);
  CHECK(fan[1].position == 0.7);

  CHECK_THROWS_AS(riemann_solve(three, 0, 3), Error);
  try {
    riemann_solve(FluxTable({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0}), 0, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_convex);
  }
}

TEST_CASE("two approaching shocks merge") {
  FluxTable f = burgers(3);
  FrontList fl = from_blocks(f, {-1.0, 1.0}, {2, 1, 0});
  // Speeds 3/2 and 1/2 meet at t = 2, x = 2.
  FrontHistory h = evolve_recorded(fl, f, 4.0);
  REQUIRE(h.interactions.size() == 1);
  CHECK(h.interactions[0].time == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(h.interactions[0].position == doctest::Approx(2.0).epsilon(1e-14));
  FrontList end = h.snapshot(4.0);
  REQUIRE(end.fronts.size() == 1);
  CHECK(end.fronts[0].left == 2);
  CHECK(end.fronts[0].right == 0);
  CHECK(end.fronts[0].speed == 1.0);
  CHECK(std::abs(end.fronts[0].position - 4.0) < 1e-12);
  auto s = sample(end, end.fronts[0].position);
  CHECK(s.first == 2);
  CHECK(s.second == 0);
  CHECK(sample(end, 3.0) == std::pair<std::size_t, std::size_t>{2, 2});
  CHECK(sample(end, 10.0) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(rh_residual(end, f) == 0.0);
  CHECK(h.first_interaction() == doctest::Approx(2.0));

  FrontList single = from_blocks(f, {0.0}, {1, 0});
  FrontList moved = evolve(single, f, 3.0);
  REQUIRE(moved.fronts.size() == 1);
  CHECK(moved.fronts[0].position == 1.5);
  CHECK(evolve_recorded(single, f, 3.0).interactions.empty());
  CHECK_THROWS_AS(evolve(moved, f, 1.0), Error);
}

TEST_CASE("staircase merges into one shock") {
  FluxTable f = burgers(4);
  FrontList fl = from_blocks(f, {-1.0, 0.0, 1.0}, {3, 2, 1, 0});
  FrontList end = evolve(fl, f, 20.0);
  REQUIRE(end.fronts.size() == 1);
  CHECK(end.fronts[0].speed == 1.5);
  CHECK(end.fronts[0].left == 3);
  CHECK(end.fronts[0].right == 0);
  // Momentum-style check: the merged shock sits where mass-weighted motion puts it.
  CHECK(std::abs(rh_residual(end, f)) < 1e-12);
}

TEST_CASE("sample and residual edge cases") {
  FrontList empty;
  empty.far_left = 3;
  CHECK(sample(empty, 0.0) == std::pair<std::size_t, std::size_t>{3, 3});
  FluxTable f = burgers(4);
  CHECK(rh_residual(empty, f) == 0.0);
  FrontList fl = from_blocks(f, {0.0}, {2, 1});
  fl.fronts[0].speed += 0.1;
  CHECK(std::abs(rh_residual(fl, f) - 0.1) < 1e-12);
  CHECK(sample(fl, -1.0) == std::pair<std::size_t, std::size_t>{2, 2});
  CHECK(sample(fl, 0.0) == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK_THROWS_AS(from_blocks(f, {0.0}, {2}), Error);
  CHECK_THROWS_AS(from_blocks(f, {1.0, 0.0}, {2, 1, 0}), Error);
}

TEST_CASE("random evolutions keep the front invariants") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    FluxTable f = burgers(2 + trial % 5);
    FrontList fl = random_blocks(rng, f, 2 + trial % 12);
    FrontHistory h = evolve_recorded(fl, f, 6.0);
    double tv = total_variation(fl, f);
    std::size_t count = fl.fronts.size();
    for (double t = 0.15; t <= 6.0; t += 0.3) {
      FrontList s = h.snapshot(t);
      check_chain(s);
      CHECK(rh_residual(s, f) < 1e-12);
      double tv_t = total_variation(s, f);
      CHECK(tv_t <= tv + 1e-12);
      tv = tv_t;
      CHECK(s.fronts.size() <= count);
      count = s.fronts.size();
      for (const Front& fr : s.fronts) {
        if (fr.left > fr.right) continue;
        // Contacts only ever join neighbouring states.
        CHECK(fr.right == fr.left + 1);
        CHECK(fr.speed == f.slopes()[fr.left]);
      }
    }
    // Evolving in two legs matches one leg.
    FrontList mid = evolve(fl, f, 2.5);
    FrontList two = evolve(mid, f, 6.0);
    FrontList one = h.snapshot(6.0);
    REQUIRE(two.fronts.size() == one.fronts.size());
    for (std::size_t i = 0; i < one.fronts.size(); ++i) {
      CHECK(std::abs(two.fronts[i].position - one.fronts[i].position) < 1e-9);
      CHECK(two.fronts[i].left == one.fronts[i].left);
    }
  }
}

TEST_CASE("shock-only data passes the entropy quotient") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t m = 2 + trial % 6;
    FluxTable f = burgers(m);
    // Decreasing staircase: shocks only, so u is genuinely one-sided Lipschitz.
    std::vector<double> br;
    std::vector<std::size_t> st{m - 1};
    double x = 0.0;
    for (std::size_t k = m - 1; k-- > 0;) {
      x += 0.1 + u(rng);
      br.push_back(x);
      st.push_back(k);
    }
    FrontList fl = from_blocks(f, br, st);
    FrontHistory h = evolve_recorded(fl, f, 5.0);
    for (double t : {0.5, 2.0, 5.0}) {
      FrontList s = h.snapshot(t);
      if (s.fronts.empty()) continue;
      std::vector<double> pos, vals;
      for (const Front& fr : s.fronts) {
        pos.push_back(fr.position);
        vals.push_back(f.state(fr.left));
      }
      vals.push_back(f.state(s.fronts.back().right));
      StepFunction uu(pos, vals, Continuity::left);
      CHECK(genpot::entropy_check(uu, t) <= 0.0);
    }
  }
}

TEST_CASE("fronts follow sticky clusters") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 10;
    std::vector<double> m, x, v;
    double pos = 0.0, vel = 3.0;
    for (int i = 0; i < n; ++i) {
      m.push_back(0.1 + u(rng));
      x.push_back(pos);
      v.push_back(vel);
      pos += 0.2 + u(rng);
      vel -= 2.0 * u(rng);
    }
    auto sys = sticky::ParticleSystem::from_arrays(m, x, v);
    StickyCorrespondence c = from_particles(sys);
    CHECK(c.flux.is_convex());
    FrontHistory h = evolve_recorded(c.initial, c.flux, 3.0);
    for (double t : {0.4, 1.1, 2.0, 3.0}) {
      auto st = sticky::evolve(sys, t);
      FrontList s = h.snapshot(t);
      REQUIRE(s.fronts.size() == st.size());
      for (std::size_t i = 0; i < st.size(); ++i) {
        CHECK(std::abs(s.fronts[i].position - st.particles()[i].position) < 1e-10);
        CHECK(std::abs(s.fronts[i].speed - st.particles()[i].velocity) < 1e-10);
        // Jump in U is the cluster mass.
        double jump = c.flux.state(s.fronts[i].left) - c.flux.state(s.fronts[i].right);
        CHECK(std::abs(jump - st.particles()[i].mass) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(from_particles(sticky::ParticleSystem::from_arrays({1.0, 1.0}, {0.0, 1.0}, {0.0, 1.0})),
                  Error);
}

TEST_CASE("a centred fan meets the entropy bound with equality") {
  FluxTable f = burgers(4);
  FrontList fan = evolve(from_blocks(f, {0.0}, {0, 3}), f, 2.0);
  REQUIRE(fan.fronts.size() == 3);
  std::vector<double> pos, vals;
  for (const Front& fr : fan.fronts) {
    pos.push_back(fr.position);
    vals.push_back(f.state(fr.left));
  }
  vals.push_back(3.0);
  CHECK(std::abs(genpot::entropy_check(StepFunction(pos, vals, Continuity::left), 2.0)) < 1e-12);
}
