#include <doctest.h>

#include <cmath>
#include <random>

#include "conslaw/error.hpp"
#include "conslaw/hopflax.hpp"
#include "conslaw/sticky.hpp"
#include "fixtures.hpp"

using namespace conslaw;
using namespace conslaw::sticky;

namespace {

constexpr double kTol = 1e-12;

ParticleSystem random_system(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m, x, v;
  double pos = -5.0 * u(rng);
  for (int i = 0; i < n; ++i) {
    m.push_back(0.05 + u(rng));
    x.push_back(pos);
    v.push_back(4.0 * u(rng) - 2.0);
    pos += 0.1 + 2.0 * u(rng);
  }
  return ParticleSystem::from_arrays(m, x, v);
}

}  // namespace

TEST_CASE("first and second collisions of the four particles") {
  ParticleSystem s = fixtures::four_particles();
  auto ev = next_collision(s);
  REQUIRE(ev.has_value());
  CHECK(std::abs(ev->time - 1.0) < kTol);
  REQUIRE(ev->groups.size() == 1);
  CHECK(ev->groups[0].first == 0);
  CHECK(ev->groups[0].last == 1);
  ParticleSystem s1 = merge(s, *ev);
  REQUIRE(s1.size() == 3);
  CHECK(std::abs(s1.particles()[0].position + 1.0) < kTol);
  CHECK(std::abs(s1.particles()[0].velocity - 1.5) < kTol);
  CHECK(std::abs(s1.particles()[0].mass - 0.5) < kTol);

  auto ev2 = next_collision(s1);
  REQUIRE(ev2.has_value());
  CHECK(std::abs(ev2->time - 1.75) < kTol);
  ParticleSystem s2 = merge(s1, *ev2);
  REQUIRE(s2.size() == 2);
  CHECK(std::abs(s2.particles()[0].position - 0.125) < kTol);
  CHECK(std::abs(s2.particles()[0].velocity - 0.7) < kTol);
  CHECK(std::abs(s2.particles()[0].mass - 5.0 / 6.0) < kTol);
}

TEST_CASE("parallel particles never collide") {
  auto s = ParticleSystem::from_arrays({1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5});
  CHECK_FALSE(next_collision(s).has_value());
}

TEST_CASE("merging a single particle is the identity") {
  ParticleSystem s = fixtures::four_particles();
  ParticleSystem m = merge(s, CollisionEvent{0.0, {{2, 2}}});
  REQUIRE(m.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(m.particles()[i].position == s.particles()[i].position);
    CHECK(m.particles()[i].velocity == s.particles()[i].velocity);
    CHECK(m.particles()[i].mass == s.particles()[i].mass);
  }
}

TEST_CASE("evolve matches the hand-computed states") {
  ParticleSystem s = fixtures::four_particles();
  ParticleSystem s0 = evolve(s, 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s0.particles()[i].position == fixtures::kPos[i]);

  ParticleSystem s1 = evolve(s, 1.0);
  REQUIRE(s1.size() == 3);
  CHECK(std::abs(s1.particles()[0].position + 1.0) < kTol);
  CHECK(std::abs(s1.particles()[1].position - 0.5) < kTol);
  CHECK(std::abs(s1.particles()[2].position - 4.0) < kTol);

  ParticleSystem s2 = evolve(s, 2.0);
  REQUIRE(s2.size() == 2);
  CHECK(std::abs(s2.particles()[0].mass - 5.0 / 6.0) < kTol);
  CHECK(std::abs(s2.particles()[0].position - 0.3) < kTol);
  CHECK(std::abs(s2.particles()[0].velocity - 0.7) < kTol);
  CHECK(std::abs(s2.particles()[1].mass - 1.0 / 6.0) < kTol);
  CHECK(std::abs(s2.particles()[1].position - 5.0) < kTol);
  CHECK(std::abs(s2.particles()[1].velocity - 1.0) < kTol);
  CHECK(s2.particles()[0].first_atom == 0);
  CHECK(s2.particles()[0].last_atom == 2);

  CHECK_THROWS_AS(evolve(s2, 1.0), Error);
}

TEST_CASE("simultaneous triple collision is one event") {
  auto s = ParticleSystem::from_arrays({1.0, 2.0, 1.0}, {-1.0, 0.0, 1.0}, {1.0, 0.0, -1.0});
  auto ev = next_collision(s);
  REQUIRE(ev.has_value());
  REQUIRE(ev->groups.size() == 1);
  CHECK(ev->groups[0].first == 0);
  CHECK(ev->groups[0].last == 2);
  ParticleSystem m = merge(s, *ev);
  REQUIRE(m.size() == 1);
  CHECK(std::abs(m.particles()[0].position) < kTol);
  CHECK(std::abs(m.particles()[0].velocity) < kTol);
}

TEST_CASE("rankine-hugoniot residual on the four particles") {
  ParticleSystem s = fixtures::four_particles();
  PiecewiseLinear a = hopflax::flux_A(hopflax::velocity_profile_a(s), s.total_mass());
  Evolution before = evolve_recorded(s, 0.5);
  CHECK(rankine_hugoniot_residual(before, a) < kTol);
  Evolution after = evolve_recorded(s, 3.0);
  CHECK(rankine_hugoniot_residual(after, a) < kTol);
  bool saw_cluster = false;
  for (const WorldLine& w : after.lines) {
    if (w.first_atom == 0 && w.last_atom == 2) {
      saw_cluster = true;
      CHECK(std::abs(w.velocity - 0.7) < kTol);
      CHECK(std::abs(w.t_birth - 1.75) < kTol);
    }
  }
  CHECK(saw_cluster);
  auto single = ParticleSystem::from_arrays({1.0}, {0.0}, {3.0});
  PiecewiseLinear a1 = hopflax::flux_A(hopflax::velocity_profile_a(single), 1.0);
  CHECK(rankine_hugoniot_residual(evolve_recorded(single, 2.0), a1) < kTol);
}

TEST_CASE("conservation, energy, ordering and semigroup on random systems") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    ParticleSystem s = random_system(rng, 2 + trial % 9);
    double mass = s.total_mass();
    double mom = s.total_momentum();
    double energy = s.kinetic_energy();
    double t1 = 1.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double t2 = t1 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    ParticleSystem a = evolve(s, t1);
    ParticleSystem b = evolve(a, t2);
    ParticleSystem c = evolve(s, t2);
    CHECK(std::abs(a.total_mass() - mass) < kTol);
    CHECK(std::abs(c.total_momentum() - mom) < kTol);
    CHECK(a.kinetic_energy() <= energy + kTol);
    CHECK(c.kinetic_energy() <= a.kinetic_energy() + kTol);
    REQUIRE(b.size() == c.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(std::abs(b.particles()[i].position - c.particles()[i].position) < kTol);
      CHECK(std::abs(b.particles()[i].velocity - c.particles()[i].velocity) < kTol);
      CHECK(std::abs(b.particles()[i].mass - c.particles()[i].mass) < kTol);
    }
  }
}

TEST_CASE("merging distinct velocities strictly loses energy") {
  auto s = ParticleSystem::from_arrays({0.25, 0.25}, {0.0, 1.0}, {2.0, 1.0});
  ParticleSystem m = merge(s, *next_collision(s));
  CHECK(m.kinetic_energy() < s.kinetic_energy());
  CHECK(std::abs(m.particles()[0].velocity - 1.5) < kTol);
}
