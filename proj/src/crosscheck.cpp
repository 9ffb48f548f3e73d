#include "conslaw/crosscheck.hpp"

#include <algorithm>
#include <cmath>

#include "conslaw/flowmap.hpp"
#include "conslaw/genpot.hpp"
#include "conslaw/hopflax.hpp"
#include "conslaw/sticky.hpp"

namespace conslaw {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"sticky", "hopflax", "flowmap", "genpot"};
  return names;
}

CrossCheckReport crosscheck(const AtomicMeasure& p0, const StepFunction& u0,
                            const std::vector<double>& times) {
  sticky::ParticleSystem sys = flowmap::initial_system(p0, u0);
  genpot::GenPotData gp = genpot::left_anchored(genpot::GenPotData{p0, u0, 0.0});
  CrossCheckReport rep;
  for (double t : times) {
    CrossCheckRow row{t, std::vector<std::vector<ClusterRow>>(4), true, 0.0, 0.0, 0.0};
    sticky::ParticleSystem st = sticky::evolve(sys, t);
    for (const auto& p : st.particles())
      row.solvers[0].push_back({p.mass, p.position, p.velocity});
    for (const auto& c : hopflax::hull_positions(sys, t).clusters)
      row.solvers[1].push_back({c.m_hi - c.m_lo, c.position, c.velocity});
    for (const auto& c : flowmap::gvp_clusters(p0, u0, t))
      row.solvers[2].push_back({c.mass, c.position, c.velocity});
    for (const auto& c : genpot::plateau_clusters(gp, t))
      row.solvers[3].push_back({c.mass, c.position, c.velocity});

    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        const auto& ca = row.solvers[a];
        const auto& cb = row.solvers[b];
        if (ca.size() != cb.size()) {
          row.counts_agree = false;
          continue;
        }
        for (std::size_t i = 0; i < ca.size(); ++i) {
          row.position_gap = std::max(row.position_gap, std::abs(ca[i].position - cb[i].position));
          row.velocity_gap = std::max(row.velocity_gap, std::abs(ca[i].velocity - cb[i].velocity));
          row.mass_gap = std::max(row.mass_gap, std::abs(ca[i].mass - cb[i].mass));
        }
      }
    }
    rep.counts_agree = rep.counts_agree && row.counts_agree;
    rep.position_gap = std::max(rep.position_gap, row.position_gap);
    rep.velocity_gap = std::max(rep.velocity_gap, row.velocity_gap);
    rep.mass_gap = std::max(rep.mass_gap, row.mass_gap);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace conslaw
