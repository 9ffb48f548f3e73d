#include "conslaw/sticky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conslaw/error.hpp"

namespace conslaw::sticky {

ParticleSystem::ParticleSystem(std::vector<Particle> particles, double time,
                               int next_id)
    : particles_(std::move(particles)), time_(time), next_id_(next_id) {
  if (!std::isfinite(time_) || time_ < 0.0) fail("system time must be finite and >= 0");
  int max_id = -1;
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    const Particle& p = particles_[i];
    if (!std::isfinite(p.mass) || !std::isfinite(p.position) || !std::isfinite(p.velocity))
      fail("particle " + std::to_string(i) + " has a non-finite field");
    if (!(p.mass > 0.0)) fail("particle " + std::to_string(i) + " has non-positive mass");
    if (i > 0 && !(particles_[i - 1].position < p.position))
      fail("particle positions must be strictly increasing");
    max_id = std::max(max_id, p.id);
  }
  if (next_id_ <= max_id) next_id_ = max_id + 1;
}

ParticleSystem ParticleSystem::from_arrays(const std::vector<double>& masses,
                                           const std::vector<double>& positions,
                                           const std::vector<double>& velocities) {
  if (masses.size() != positions.size() || masses.size() != velocities.size())
    fail("particle arrays differ in length");
  std::vector<Particle> ps;
  ps.reserve(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    ps.push_back({masses[i], positions[i], velocities[i], i, i, static_cast<int>(i)});
  }
  return ParticleSystem(std::move(ps));
}

double ParticleSystem::total_mass() const noexcept {
  double s = 0.0;
  for (const auto& p : particles_) s += p.mass;
  return s;
}

double ParticleSystem::total_momentum() const noexcept {
  double s = 0.0;
  for (const auto& p : particles_) s += p.mass * p.velocity;
  return s;
}

double ParticleSystem::kinetic_energy() const noexcept {
  double s = 0.0;
  for (const auto& p : particles_) s += 0.5 * p.mass * p.velocity * p.velocity;
  return s;
}

AtomicMeasure ParticleSystem::mass_measure() const {
  std::vector<Atom> atoms;
  atoms.reserve(particles_.size());
  for (const auto& p : particles_) atoms.push_back({p.position, p.mass});
  return AtomicMeasure(std::move(atoms));
}

std::optional<CollisionEvent> next_collision(const ParticleSystem& sys) {
  const auto& ps = sys.particles();
  std::vector<double> tau(ps.size() > 0 ? ps.size() - 1 : 0,
                          std::numeric_limits<double>::infinity());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    double closing = ps[i].velocity - ps[i + 1].velocity;
    if (closing > 0.0) {
      tau[i] = (ps[i + 1].position - ps[i].position) / closing;
      best = std::min(best, tau[i]);
    }
  }
  if (!std::isfinite(best)) return std::nullopt;

  // Pairs meeting within rounding of the earliest time form one event;
  // adjacent meeting pairs chain into a single multi-particle group.
  double tol = 1e-12 * std::max(1.0, best);
  CollisionEvent ev{sys.time() + best, {}};
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!(tau[i] - best <= tol)) continue;
    if (!ev.groups.empty() && ev.groups.back().last == i) {
      ev.groups.back().last = i + 1;
    } else {
      ev.groups.push_back({i, i + 1});
    }
  }
  return ev;
}

ParticleSystem drift(const ParticleSystem& sys, double t) {
  if (t < sys.time()) fail("cannot drift backwards in time");
  double dt = t - sys.time();
  std::vector<Particle> ps = sys.particles();
  for (auto& p : ps) p.position += p.velocity * dt;
  return ParticleSystem(std::move(ps), t, sys.next_id());
}

namespace {

struct MergeOutcome {
  std::vector<Particle> particles;
  std::vector<std::size_t> absorbed_ids;
  int next_id;
};

MergeOutcome merge_groups(const ParticleSystem& sys, const CollisionEvent& ev) {
  double dt = ev.time - sys.time();
  if (dt < 0.0) fail("collision event precedes system time");
  const auto& src = sys.particles();
  MergeOutcome out{{}, {}, sys.next_id()};
  out.particles.reserve(src.size());
  std::size_t g = 0;
  for (std::size_t i = 0; i < src.size();) {
    if (g < ev.groups.size() && ev.groups[g].first == i) {
      const IndexRange r = ev.groups[g++];
      if (r.last >= src.size() || r.last < r.first) fail("collision group out of range");
      double mass = 0.0;
      double momentum = 0.0;
      double moment = 0.0;
      for (std::size_t j = r.first; j <= r.last; ++j) {
        const Particle& p = src[j];
        mass += p.mass;
        momentum += p.mass * p.velocity;
        moment += p.mass * (p.position + p.velocity * dt);
        out.absorbed_ids.push_back(j);
      }
      Particle c{mass, moment / mass, momentum / mass, src[r.first].first_atom,
                 src[r.last].last_atom, out.next_id};
      if (r.first == r.last) {
        c = src[r.first];
        c.position += c.velocity * dt;
        out.absorbed_ids.pop_back();
      } else {
        ++out.next_id;
      }
      out.particles.push_back(c);
      i = r.last + 1;
    } else {
      Particle p = src[i];
      p.position += p.velocity * dt;
      out.particles.push_back(p);
      ++i;
    }
  }
  return out;
}

}  // namespace

ParticleSystem merge(const ParticleSystem& sys, const CollisionEvent& ev) {
  MergeOutcome out = merge_groups(sys, ev);
  return ParticleSystem(std::move(out.particles), ev.time, out.next_id);
}

ParticleSystem evolve(const ParticleSystem& sys, double t) {
  return evolve_recorded(sys, t).state;
}

Evolution evolve_recorded(const ParticleSystem& sys, double t) {
  if (!(t >= sys.time())) fail("evolve target time precedes system time");
  std::vector<WorldLine> lines;
  std::vector<std::size_t> open;  // index into lines for each current particle
  auto open_line = [&lines](const Particle& p, double time, double mass_left) {
    lines.push_back({p.id, time, p.position, time, p.position, p.mass, p.velocity,
                     mass_left, p.first_atom, p.last_atom, false});
    return lines.size() - 1;
  };
  {
    double left = 0.0;
    for (const auto& p : sys.particles()) {
      open.push_back(open_line(p, sys.time(), left));
      left += p.mass;
    }
  }

  Evolution evo{sys, {}, {}};
  ParticleSystem cur = sys;
  while (true) {
    auto ev = next_collision(cur);
    if (!ev || ev->time > t) break;
    MergeOutcome out = merge_groups(cur, *ev);
    // Close absorbed lines at the meeting point and open the new clusters.
    std::vector<std::size_t> next_open;
    next_open.reserve(out.particles.size());
    std::size_t g = 0;
    double left = 0.0;
    std::size_t src = 0;
    for (const Particle& p : out.particles) {
      bool merged = g < ev->groups.size() && ev->groups[g].first == src &&
                    ev->groups[g].last > ev->groups[g].first;
      if (merged) {
        for (std::size_t j = ev->groups[g].first; j <= ev->groups[g].last; ++j) {
          WorldLine& w = lines[open[j]];
          w.t_end = ev->time;
          w.x_end = p.position;
          w.absorbed = true;
        }
        next_open.push_back(open_line(p, ev->time, left));
        src = ev->groups[g].last + 1;
        ++g;
      } else {
        if (g < ev->groups.size() && ev->groups[g].first == src) ++g;
        next_open.push_back(open[src]);
        ++src;
      }
      left += p.mass;
    }
    open = std::move(next_open);
    evo.event_times.push_back(ev->time);
    cur = ParticleSystem(std::move(out.particles), ev->time, out.next_id);
  }
  double dt = t - cur.time();
  std::vector<Particle> ps = cur.particles();
  for (auto& p : ps) p.position += p.velocity * dt;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    lines[open[i]].t_end = t;
    lines[open[i]].x_end = ps[i].position;
  }
  evo.state = ParticleSystem(std::move(ps), t, cur.next_id());
  evo.lines = std::move(lines);
  return evo;
}

double rankine_hugoniot_residual(const Evolution& history,
                                 const PiecewiseLinear& flux) {
  double worst = 0.0;
  for (const WorldLine& w : history.lines) {
    double duration = w.t_end - w.t_birth;
    double slope = duration > 1e-3 ? (w.x_end - w.x_birth) / duration : w.velocity;
    double ml = std::clamp(w.mass_left, flux.domain_lo(), flux.domain_hi());
    double mr = std::clamp(w.mass_left + w.mass, flux.domain_lo(), flux.domain_hi());
    double sigma = (flux(mr) - flux(ml)) / (mr - ml);
    worst = std::max(worst, std::abs(slope - sigma));
  }
  return worst;
}

}  // namespace conslaw::sticky
