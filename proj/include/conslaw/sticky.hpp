#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "conslaw/measures.hpp"

namespace conslaw::sticky {

//! A single particle or a cluster of merged particles.
struct Particle {
  double mass;
  double position;
  double velocity;
  //! Original atom indices covered by this cluster (inclusive).
  std::size_t first_atom = 0;
  std::size_t last_atom = 0;
  //! World-line identifier, unique within one evolution.
  int id = 0;
};

class ParticleSystem {
 public:
  ParticleSystem(std::vector<Particle> particles, double time = 0.0,
                 int next_id = -1);

  //! Builds unmerged particles with ids and atom indices 0..n-1.
  static ParticleSystem from_arrays(const std::vector<double>& masses,
                                    const std::vector<double>& positions,
                                    const std::vector<double>& velocities);

  const std::vector<Particle>& particles() const noexcept { return particles_; }
  std::size_t size() const noexcept { return particles_.size(); }
  double time() const noexcept { return time_; }
  int next_id() const noexcept { return next_id_; }

  double total_mass() const noexcept;
  double total_momentum() const noexcept;
  double kinetic_energy() const noexcept;

  //! Positions and masses as a measure.
  AtomicMeasure mass_measure() const;

 private:
  std::vector<Particle> particles_;
  double time_;
  int next_id_;
};

//! Inclusive range of indices into ParticleSystem::particles().
struct IndexRange {
  std::size_t first;
  std::size_t last;
};

struct CollisionEvent {
  double time;
  //! Disjoint contiguous groups meeting at this time, left to right.
  std::vector<IndexRange> groups;
};

std::optional<CollisionEvent> next_collision(const ParticleSystem& sys);

//! Moves every particle ballistically to time t without resolving contacts.
ParticleSystem drift(const ParticleSystem& sys, double t);

ParticleSystem merge(const ParticleSystem& sys, const CollisionEvent& ev);

ParticleSystem evolve(const ParticleSystem& sys, double t);

//! One straight segment of a cluster's trajectory.
struct WorldLine {
  int id;
  double t_birth;
  double x_birth;
  double t_end;
  double x_end;
  double mass;
  double velocity;
  //! Mass of everything strictly to the left of this cluster.
  double mass_left;
  std::size_t first_atom;
  std::size_t last_atom;
  //! False while the cluster is still alive at the end of the evolution.
  bool absorbed = false;
};

struct Evolution {
  ParticleSystem state;
  std::vector<WorldLine> lines;
  std::vector<double> event_times;
};

//! Like evolve, keeping every cluster's world-line.
Evolution evolve_recorded(const ParticleSystem& sys, double t);

/*!
  Largest gap between a recorded world-line slope and the chord of the flux
  A over the cluster's mass interval.
*/
double rankine_hugoniot_residual(const Evolution& history,
                                 const PiecewiseLinear& flux);

}  // namespace conslaw::sticky
