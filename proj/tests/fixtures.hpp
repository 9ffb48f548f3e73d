#pragma once

#include <vector>

#include "conslaw/measures.hpp"
#include "conslaw/sticky.hpp"

namespace fixtures {

// Four particles: masses, positions and velocities.
inline const std::vector<double> kMass{0.25, 0.25, 1.0 / 3.0, 1.0 / 6.0};
inline const std::vector<double> kPos{-3.0, -2.0, 1.0, 3.0};
inline const std::vector<double> kVel{2.0, 1.0, -0.5, 1.0};

inline conslaw::sticky::ParticleSystem four_particles() {
  return conslaw::sticky::ParticleSystem::from_arrays(kMass, kPos, kVel);
}

inline conslaw::AtomicMeasure four_measure() {
  std::vector<conslaw::Atom> atoms;
  for (std::size_t i = 0; i < kMass.size(); ++i) atoms.push_back({kPos[i], kMass[i]});
  return conslaw::AtomicMeasure(atoms);
}

// Right-continuous velocity field, zero left of the first atom.
inline conslaw::StepFunction four_u0() {
  return conslaw::StepFunction(kPos, {0.0, 2.0, 1.0, -0.5, 1.0},
                               conslaw::Continuity::right);
}

}  // namespace fixtures
