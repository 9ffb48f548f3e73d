#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "conslaw/crosscheck.hpp"
#include "conslaw/ensemble.hpp"
#include "conslaw/error.hpp"
#include "conslaw/flowmap.hpp"
#include "conslaw/fronttrack.hpp"
#include "conslaw/genpot.hpp"
#include "conslaw/hopflax.hpp"
#include "conslaw/randstats.hpp"
#include "conslaw/sticky.hpp"

namespace cli {

using namespace conslaw;

namespace {

struct Particles {
  std::vector<double> mass, position, velocity;
  double background;

  sticky::ParticleSystem system() const { return sticky::ParticleSystem::from_arrays(mass, position, velocity); }
  AtomicMeasure measure() const {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < mass.size(); ++i) atoms.push_back({position[i], mass[i]});
    return AtomicMeasure(atoms);
  }
  //! Right-continuous velocity field taking the background value left of the atoms.
  StepFunction u0() const {
    std::vector<double> vals{background};
    vals.insert(vals.end(), velocity.begin(), velocity.end());
    return StepFunction(position, vals, Continuity::right);
  }
};

Particles read_particles(const Section& root) {
  Section s = root.child("particles");
  Particles p{s.numbers("mass"), s.numbers("position"), s.numbers("velocity"), s.number("background", 0.0)};
  if (p.mass.empty()) s.fail("mass", "at least one particle is required");
  if (p.position.size() != p.mass.size()) s.fail("position", "needs one entry per mass");
  if (p.velocity.size() != p.mass.size()) s.fail("velocity", "needs one entry per mass");
  for (double m : p.mass)
    if (!(m > 0.0)) s.fail("mass", "masses must be positive");
  for (std::size_t i = 1; i < p.position.size(); ++i)
    if (!(p.position[i] > p.position[i - 1])) s.fail("position", "positions must be strictly increasing");
  return p;
}

std::vector<double> read_times(const Section& s, const std::string& key = "times") {
  std::vector<double> t = s.numbers(key);
  if (t.empty()) s.fail(key, "at least one time is required");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0)) s.fail(key, "times must be nonnegative");
    if (i > 0 && !(t[i] > t[i - 1])) s.fail(key, "times must be strictly increasing");
  }
  return t;
}

std::uint64_t read_seed(Run& run) {
  std::uint64_t seed;
  if (run.seed_flag) {
    seed = *run.seed_flag;
  } else {
    if (!run.cfg.has("seed")) run.cfg.fail("seed", "an explicit seed is required (config or --seed)");
    std::int64_t s = run.cfg.integer("seed");
    if (s < 0) run.cfg.fail("seed", "seed must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
  }
  run.used["seed"] = seed;
  return seed;
}

double read_tolerance(Run& run, double fallback) {
  double tol = run.tolerance_flag ? *run.tolerance_flag : run.cfg.number("tolerance", fallback);
  if (!(tol >= 0.0)) run.cfg.fail("tolerance", "tolerance must be nonnegative");
  run.used["tolerance"] = tol;
  return tol;
}

fronttrack::FluxTable read_flux(const Section& s, std::vector<double> default_states = {}) {
  std::vector<double> states = s.numbers("states", default_states);
  if (states.size() < 1) s.fail("states", "at least one state is required");
  std::string fn = s.text("function", s.has("values") ? "table" : "burgers");
  std::vector<double> values;
  if (fn == "table") {
    values = s.numbers("values");
  } else if (fn == "burgers") {
    for (double u : states) values.push_back(0.5 * u * u);
  } else {
    s.fail("function", "expected 'table' or 'burgers'");
  }
  if (values.size() != states.size()) s.fail("values", "needs one entry per state");
  for (std::size_t i = 1; i < states.size(); ++i)
    if (!(states[i] > states[i - 1])) s.fail("states", "states must be strictly increasing");
  return fronttrack::FluxTable(states, values);
}

std::size_t state_index(const Section& s, const std::string& key, const fronttrack::FluxTable& flux) {
  double v = s.number(key);
  for (std::size_t i = 0; i < flux.size(); ++i)
    if (flux.state(i) == v) return i;
  s.fail(key, "value is not a flux table state");
}

void check_states(const Section& s, const std::string& key, const std::vector<double>& vals,
                  const fronttrack::FluxTable& flux) {
  for (double v : vals) {
    bool ok = false;
    for (std::size_t i = 0; i < flux.size(); ++i) ok = ok || flux.state(i) == v;
    if (!ok) s.fail(key, "value " + num(v) + " is not a flux table state");
  }
}

std::string interval_text(const Interval& iv) {
  return std::string(iv.lo_closed ? "[" : "(") + num(iv.lo) + " " + num(iv.hi) + (iv.hi_closed ? "]" : ")");
}

}  // namespace

int cmd_sticky(Run& run) {
  Particles p = read_particles(run.cfg);
  std::vector<double> times = read_times(run.cfg);
  double tol = read_tolerance(run, 1e-10);
  sticky::ParticleSystem sys = p.system();
  sticky::Evolution ev = sticky::evolve_recorded(sys, times.back());

  std::vector<const sticky::WorldLine*> born;
  for (const auto& l : ev.lines)
    if (l.t_birth > sys.time()) born.push_back(&l);
  std::sort(born.begin(), born.end(), [](auto* a, auto* b) {
    return a->t_birth != b->t_birth ? a->t_birth < b->t_birth : a->x_birth < b->x_birth;
  });
  Csv events({"t", "x", "mass", "velocity", "first_atom", "last_atom"});
  for (auto* l : born)
    events.row().add(l->t_birth).add(l->x_birth).add(l->mass).add(l->velocity).add(l->first_atom).add(l->last_atom);
  run.out.write("collisions.csv", events.str());

  Csv clusters({"t", "index", "mass", "position", "velocity", "first_atom", "last_atom"});
  double drift = 0.0;
  for (double t : times) {
    auto st = sticky::evolve(sys, t);
    drift = std::max({drift, std::abs(st.total_mass() - sys.total_mass()),
                      std::abs(st.total_momentum() - sys.total_momentum())});
    for (std::size_t i = 0; i < st.size(); ++i) {
      const auto& q = st.particles()[i];
      clusters.row().add(t).add(i).add(q.mass).add(q.position).add(q.velocity).add(q.first_atom).add(q.last_atom);
    }
  }
  run.out.write("clusters.csv", clusters.str());

  Csv lines({"id", "t_birth", "x_birth", "t_end", "x_end", "mass", "velocity", "first_atom", "last_atom"});
  std::vector<Segment> segs;
  for (const auto& l : ev.lines) {
    lines.row().add(l.id).add(l.t_birth).add(l.x_birth).add(l.t_end).add(l.x_end).add(l.mass).add(l.velocity)
        .add(l.first_atom).add(l.last_atom);
    segs.push_back({l.x_birth, l.t_birth, l.x_end, l.t_end});
  }
  run.out.figure("worldlines", svg_segments("sticky world-lines", "x", "t", segs), lines.str());

  PiecewiseLinear flux = hopflax::flux_A(hopflax::velocity_profile_a(sys), sys.total_mass());
  double rh = sticky::rankine_hugoniot_residual(ev, flux);
  run.summary = {{"collisions", born.size()}, {"rh_residual", rh}, {"conservation_drift", drift}};
  return rh <= tol && drift <= tol ? 0 : 1;
}

int cmd_hopflax(Run& run) {
  Particles p = read_particles(run.cfg);
  std::vector<double> times = read_times(run.cfg);
  sticky::ParticleSystem sys = p.system();
  Csv hull({"t", "m", "shifted_phi", "hull"});
  Csv clusters({"t", "index", "m_lo", "m_hi", "position", "velocity"});
  Csv vacuum({"t", "mass", "x_lo", "x_hi"});
  std::vector<Series> series;
  bool convex = true;
  for (double t : times) {
    PiecewiseLinear phi = hopflax::shifted_phi(sys, t);
    auto h = hopflax::hull_positions(sys, t);
    convex = convex && h.hull.is_convex();
    std::set<double> ms;
    for (const auto& k : phi.knots()) ms.insert(k.x);
    for (const auto& k : h.hull.knots()) ms.insert(k.x);
    Series sp{"Phi0+tA t=" + num(t), {}, {}}, sh{"hull t=" + num(t), {}, {}};
    for (double m : ms) {
      hull.row().add(t).add(m).add(phi(m)).add(h.hull(m));
      sp.xs.push_back(m);
      sp.ys.push_back(phi(m));
      sh.xs.push_back(m);
      sh.ys.push_back(h.hull(m));
    }
    series.push_back(sp);
    series.push_back(sh);
    for (std::size_t i = 0; i < h.clusters.size(); ++i) {
      const auto& c = h.clusters[i];
      clusters.row().add(t).add(i).add(c.m_lo).add(c.m_hi).add(c.position).add(c.velocity);
    }
    for (const auto& g : h.vacuum) vacuum.row().add(t).add(g.mass).add(g.x_lo).add(g.x_hi);
  }
  run.out.figure("hull", svg_lines("shifted potential and its hull", "m", "value", series), hull.str());
  run.out.write("clusters.csv", clusters.str());
  run.out.write("vacuum.csv", vacuum.str());
  run.summary = {{"hulls_convex", convex}};
  return convex ? 0 : 1;
}

int cmd_flowmap(Run& run) {
  Particles p = read_particles(run.cfg);
  std::vector<double> times = read_times(run.cfg);
  AtomicMeasure p0 = p.measure();
  StepFunction u0 = p.u0();
  Csv elements({"t", "lagrangian", "background", "image", "mass", "velocity", "first_atom", "last_atom"});
  Csv gaps({"t", "gap"});
  Csv gvp({"t", "index", "first_atom", "last_atom", "mass", "position", "velocity"});
  Csv map({"t", "y0", "phi0", "y1", "phi1"});
  std::vector<Segment> segs;
  double lo = p.position.front() - 1.0, hi = p.position.back() + 1.0;
  for (double t : times) {
    auto part = flowmap::inverse_partition(p0, u0, t);
    for (const auto& e : part.elements)
      elements.row().add(t).add(interval_text(e.lagrangian)).add(e.background).add(e.image).add(e.mass)
          .add(e.velocity).add(e.first_atom).add(e.last_atom);
    for (const auto& g : part.gaps) gaps.row().add(t).add(interval_text(g));
    auto cl = flowmap::gvp_clusters(p0, u0, t);
    for (std::size_t i = 0; i < cl.size(); ++i)
      gvp.row().add(t).add(i).add(cl[i].first_atom).add(cl[i].last_atom).add(cl[i].mass).add(cl[i].position)
          .add(cl[i].velocity);
    auto fwd = flowmap::forward_map(u0, t);
    for (const auto& b : fwd.branches) {
      double a = std::max(b.domain.lo, lo), c = std::min(b.domain.hi, hi);
      if (a > c) continue;
      map.row().add(t).add(a).add(a + t * b.velocity).add(c).add(c + t * b.velocity);
      segs.push_back({a, a + t * b.velocity, c, c + t * b.velocity});
    }
  }
  run.out.write("partition.csv", elements.str());
  run.out.write("gaps.csv", gaps.str());
  run.out.write("gvp.csv", gvp.str());
  run.out.figure("flowmap", svg_segments("forward map y -> y + t u0(y)", "y", "phi", segs), map.str());
  return 0;
}

int cmd_genpot(Run& run) {
  Particles p = read_particles(run.cfg);
  std::vector<double> times = read_times(run.cfg);
  Section g = run.cfg.child("genpot");
  auto points = g.matrix("points");
  for (const auto& pt : points)
    if (pt.size() != 2 || !(pt[1] > 0.0)) g.fail("points", "each point is [x, t] with t > 0");
  genpot::GenPotData data{p.measure(), p.u0(), g.number("base", 0.0)};
  double tol = read_tolerance(run, 1e-12);

  Csv mins({"x", "t", "v", "branches", "components", "y_star", "y_star_upper", "attained_at_upper"});
  Csv curve({"x", "t", "y", "F"});
  std::vector<Series> series;
  double lo = p.position.front() - 1.0, hi = p.position.back() + 1.0;
  for (const auto& pt : points) {
    auto s = genpot::minimize_F(data, pt[0], pt[1]);
    std::string br, comp;
    for (std::size_t k : s.branches) br += (br.empty() ? "" : ";") + std::to_string(k);
    for (const auto& c : s.components) comp += (comp.empty() ? "" : ";") + interval_text(c);
    mins.row().add(pt[0]).add(pt[1]).add(s.v).add(br).add(comp).add(s.y_star).add(s.y_star_upper)
        .add(s.attained_at_upper);
    Series se{"x=" + num(pt[0]) + " t=" + num(pt[1]), {}, {}};
    for (int i = 0; i <= 400; ++i) {
      double y = lo + (hi - lo) * i / 400.0;
      double f = genpot::potential_F(data, y, pt[0], pt[1]);
      curve.row().add(pt[0]).add(pt[1]).add(y).add(f);
      se.xs.push_back(y);
      se.ys.push_back(f);
    }
    series.push_back(se);
  }
  run.out.write("minimizers.csv", mins.str());
  run.out.figure("potential", svg_lines("generalized potential F(y; x, t)", "y", "F", series), curve.str());

  Csv plates({"t", "index", "position", "first_atom", "last_atom", "mass", "velocity"});
  genpot::GenPotData anchored = genpot::left_anchored(data);
  double entropy = -kInf;
  for (double t : times) {
    if (!(t > 0.0)) continue;
    auto cl = genpot::plateau_clusters(anchored, t);
    for (std::size_t i = 0; i < cl.size(); ++i)
      plates.row().add(t).add(i).add(cl[i].position).add(cl[i].first_atom).add(cl[i].last_atom).add(cl[i].mass)
          .add(cl[i].velocity);
    entropy = std::max(entropy, genpot::entropy_check(genpot::velocity_field(cl), t));
  }
  run.out.write("plateaus.csv", plates.str());
  run.summary = {{"max_entropy_excess", entropy}};
  return entropy <= tol ? 0 : 1;
}

int cmd_fronttrack(Run& run) {
  std::vector<double> times = read_times(run.cfg);
  Section f = run.cfg.child("fronttrack");
  double tol = read_tolerance(run, 1e-12);
  std::string init = f.text("initial", "blocks");
  std::optional<fronttrack::FluxTable> flux;
  fronttrack::FrontList fl;
  if (init == "particles") {
    Particles p = read_particles(run.cfg);
    for (std::size_t i = 1; i < p.velocity.size(); ++i)
      if (p.velocity[i] > p.velocity[i - 1])
        run.cfg.child("particles").fail("velocity", "the sticky correspondence needs nonincreasing velocities");
    auto c = fronttrack::from_particles(p.system());
    flux = c.flux;
    fl = c.initial;
  } else if (init == "velocity_field" || init == "blocks") {
    std::vector<double> breaks, vals;
    if (init == "velocity_field") {
      Particles p = read_particles(run.cfg);
      breaks = p.position;
      vals = p.u0().values();
    } else {
      Section b = f.child("blocks");
      breaks = b.numbers("breaks");
      vals = b.numbers("values");
      if (vals.size() != breaks.size() + 1) b.fail("values", "needs one more entry than breaks");
      for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1])) b.fail("breaks", "breaks must be strictly increasing");
    }
    std::vector<double> states(vals);
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    Section fs = f.child("flux");
    flux = read_flux(fs, states);
    check_states(fs, "states", vals, *flux);
    if (!flux->is_convex()) fs.fail("values", "front tracking needs a convex flux table");
    std::vector<std::size_t> blocks;
    for (double v : vals) blocks.push_back(flux->index_of(v));
    fl = fronttrack::from_blocks(*flux, breaks, blocks);
  } else {
    f.fail("initial", "expected 'blocks', 'velocity_field' or 'particles'");
  }

  auto h = fronttrack::evolve_recorded(fl, *flux, times.back());
  Csv fronts({"t", "index", "position", "left", "right", "u_left", "u_right", "speed"});
  double rh = 0.0, tv0 = fronttrack::total_variation(fl, *flux), tv_growth = 0.0;
  for (double t : times) {
    auto s = h.snapshot(t);
    rh = std::max(rh, fronttrack::rh_residual(s, *flux));
    tv_growth = std::max(tv_growth, fronttrack::total_variation(s, *flux) - tv0);
    for (std::size_t i = 0; i < s.fronts.size(); ++i) {
      const auto& q = s.fronts[i];
      fronts.row().add(t).add(i).add(q.position).add(q.left).add(q.right).add(flux->state(q.left))
          .add(flux->state(q.right)).add(q.speed);
    }
  }
  run.out.write("fronts.csv", fronts.str());
  Csv lines({"t_birth", "x_birth", "t_death", "x_death", "left", "right", "speed"});
  std::vector<Segment> segs;
  for (const auto& g : h.segments) {
    double td = std::min(g.t_death, h.t1);
    lines.row().add(g.t_birth).add(g.x_birth).add(td).add(g.at(td)).add(g.left).add(g.right).add(g.speed);
    segs.push_back({g.x_birth, g.t_birth, g.at(td), td});
  }
  run.out.figure("worldlines", svg_segments("front world-lines", "x", "t", segs), lines.str());
  Csv inter({"t", "x", "left", "right", "incoming", "outgoing"});
  for (const auto& i : h.interactions)
    inter.row().add(i.time).add(i.position).add(i.left).add(i.right).add(i.incoming).add(i.outgoing);
  run.out.write("interactions.csv", inter.str());
  run.summary = {{"rh_residual", rh}, {"interactions", h.interactions.size()}, {"tv_growth", tv_growth}};
  return rh <= tol && tv_growth <= tol ? 0 : 1;
}

namespace {

randstats::InitialLaw read_law(const Section& root, const fronttrack::FluxTable& flux) {
  Section s = root.child("law");
  std::string kind = s.text("kind");
  if (kind == "riemann") {
    auto [lo, hi] = s.has("location") ? s.range("location") : std::pair<double, double>{0.0, 0.0};
    randstats::Riemann r{s.number("u_left"), s.number("u_right"), lo, hi};
    check_states(s, "u_left", {r.u_l}, flux);
    check_states(s, "u_right", {r.u_r}, flux);
    return r;
  }
  if (kind == "markov") {
    auto [lo, hi] = s.range("domain");
    randstats::MarkovChain m{s.numbers("states"), s.matrix("transition"), s.number("rate"), lo, hi,
                             s.numbers("initial", {})};
    check_states(s, "states", m.states, flux);
    try {
      randstats::validate(m);
    } catch (const Error& e) {
      s.fail("transition", e.what());
    }
    return m;
  }
  if (kind == "spectral") {
    auto [lo, hi] = s.range("domain");
    randstats::SpectrallyNegative l{s.number("start"), s.number("drift"), s.number("jump_rate"),
                                    s.number("jump_mean"), lo, hi, flux.states()};
    try {
      randstats::validate(l);
    } catch (const Error& e) {
      s.fail("kind", e.what());
    }
    return l;
  }
  if (kind == "two_shock") {
    auto [alo, ahi] = s.range("location");
    auto [glo, ghi] = s.range("gap");
    randstats::TwoShock l{s.number("u_left"), s.number("u_mid"), s.number("u_right"), alo, ahi, glo, ghi};
    check_states(s, "u_left", {l.u_left}, flux);
    check_states(s, "u_mid", {l.u_mid}, flux);
    check_states(s, "u_right", {l.u_right}, flux);
    if (!(glo > 0.0)) s.fail("gap", "gaps must be positive");
    return l;
  }
  s.fail("kind", "expected riemann, markov, spectral or two_shock");
}

}  // namespace

int cmd_mc_stats(Run& run) {
  std::uint64_t seed = read_seed(run);
  double sigma = read_tolerance(run, 3.0);
  fronttrack::FluxTable flux = read_flux(run.cfg.child("flux"));
  if (!flux.is_convex()) run.cfg.child("flux").fail("values", "front tracking needs a convex flux table");
  randstats::InitialLaw law = read_law(run.cfg, flux);
  Section es = run.cfg.child("ensemble");
  std::int64_t n = es.integer("size");
  if (n < 1) es.fail("size", "ensemble size must be positive");
  double t_end = es.number("t_end");
  if (!(t_end > 0.0)) es.fail("t_end", "t_end must be positive");
  randstats::Ensemble e =
      randstats::run_ensemble(law, flux, static_cast<std::size_t>(n), seed, t_end, run.workers);
  double tmin = e.first_interaction();
  run.summary["first_interaction"] = std::isfinite(tmin) ? nlohmann::json(tmin) : nlohmann::json("none");

  auto check_time = [&](const Section& s, const std::vector<double>& ts) {
    for (double t : ts)
      if (t > t_end) s.fail("times", "times must not exceed ensemble.t_end");
  };
  if (auto s = run.cfg.optional_child("p1")) {
    auto ts = read_times(*s);
    check_time(*s, ts);
    auto grid = s->numbers("grid");
    Csv csv({"t", "x", "state", "count", "p", "stderr"});
    nlohmann::json js = nlohmann::json::array();
    std::vector<Series> series;
    for (double t : ts) {
      auto est = randstats::estimate_p1(e, t, grid);
      for (std::size_t l = 0; l < flux.size(); ++l) {
        Series se{"u=" + num(flux.state(l)) + " t=" + num(t), grid, {}};
        for (std::size_t g = 0; g < grid.size(); ++g) {
          csv.row().add(t).add(grid[g]).add(flux.state(l)).add(static_cast<std::int64_t>(est.counts[g][l]))
              .add(est.value[g][l]).add(est.stderr_[g][l]);
          se.ys.push_back(est.value[g][l]);
        }
        series.push_back(se);
      }
      js.push_back({{"t", t}, {"grid", grid}, {"counts", est.counts}, {"p", est.value}, {"stderr", est.stderr_}});
    }
    run.out.figure("p1", svg_lines("one-point distribution", "x", "p1", series), csv.str());
    run.out.write("p1.json", js.dump(1) + "\n");
  }
  if (auto s = run.cfg.optional_child("p2")) {
    auto ts = read_times(*s);
    check_time(*s, ts);
    auto grid = s->numbers("grid");
    double w = s->number("window", 0.0);
    Csv csv({"t", "x", "u_left", "u_right", "window", "count", "density", "stderr"});
    for (double t : ts) {
      auto est = randstats::estimate_p2(e, t, grid, w);
      const std::size_t M = flux.size();
      for (std::size_t g = 0; g < grid.size(); ++g)
        for (std::size_t q = 0; q < M * M; ++q) {
          if (q / M == q % M) continue;
          csv.row().add(t).add(grid[g]).add(flux.state(q / M)).add(flux.state(q % M)).add(est.window)
              .add(static_cast<std::int64_t>(est.counts[g][q])).add(est.value[g][q]).add(est.stderr_[g][q]);
        }
    }
    run.out.write("p2.csv", csv.str());
  }
  bool ok = true;
  if (run.cfg.has("hierarchy")) {
    Csv csv({"order", "level", "u", "v", "x", "t", "dt", "width", "delta", "lhs", "rhs", "residual", "stderr",
             "sigmas", "before_interaction", "small_ensemble", "expect", "pass"});
    int passed = 0, total = 0;
    for (const Section& h : run.cfg.list("hierarchy")) {
      std::int64_t order = h.integer("order");
      double x = h.number("x"), t = h.number("t"), dt = h.number("dt");
      std::string expect = h.text("expect", "holds");
      if (expect != "holds" && expect != "violated") h.fail("expect", "expected 'holds' or 'violated'");
      if (!(dt > 0.0) || t - dt < 0.0 || t + dt > t_end) h.fail("dt", "stencil must stay inside [0, t_end]");
      randstats::HierarchyResult r{};
      Csv& row = csv.row();
      if (order == 1) {
        std::int64_t k = h.integer("level");
        if (k < 0 || k + 1 >= static_cast<std::int64_t>(flux.size())) h.fail("level", "level out of range");
        double w = h.number("width");
        if (!(w > 0.0)) h.fail("width", "width must be positive");
        r = randstats::hierarchy_residual_first(e, static_cast<std::size_t>(k), x, t, dt, w);
        row.add(1).add(k).add("").add("").add(x).add(t).add(dt).add(w).add("");
      } else if (order == 2) {
        std::size_t u = state_index(h, "u", flux), v = state_index(h, "v", flux);
        if (u == v) h.fail("v", "u and v must differ");
        double w = h.number("width"), d = h.number("delta");
        if (!(w > 0.0) || !(d > 0.0)) h.fail("width", "width and delta must be positive");
        r = randstats::hierarchy_residual_second(e, u, v, x, t, dt, w, d);
        row.add(2).add("").add(flux.state(u)).add(flux.state(v)).add(x).add(t).add(dt).add(w).add(d);
      } else {
        h.fail("order", "order must be 1 or 2");
      }
      double sig = r.stderr_ > 0.0 ? std::abs(r.residual) / r.stderr_ : (r.residual == 0.0 ? 0.0 : kInf);
      bool holds = std::abs(r.residual) <= sigma * r.stderr_;
      bool pass = expect == "holds" ? holds : !holds;
      row.add(r.lhs).add(r.rhs).add(r.residual).add(r.stderr_).add(sig).add(r.before_interaction)
          .add(r.small_ensemble).add(expect).add(pass);
      ok = ok && pass;
      passed += pass;
      ++total;
    }
    run.out.write("hierarchy.csv", csv.str());
    run.summary["hierarchy_passed"] = passed;
    run.summary["hierarchy_checks"] = total;
  }
  return ok ? 0 : 1;
}

int cmd_fm_shocks(Run& run) {
  std::uint64_t seed = read_seed(run);
  Section ps = run.cfg.child("potential");
  auto [lo, hi] = ps.range("domain");
  randstats::BrownianPotential law{ps.number("variance"), ps.number("step"), lo, hi};
  try {
    randstats::validate(law);
  } catch (const Error& e) {
    ps.fail("step", e.what());
  }
  double t = run.cfg.number("t");
  if (!(t > 0.0)) run.cfg.fail("t", "t must be positive");
  Section sc = run.cfg.child("scan");
  auto [slo, shi] = sc.range("range");
  double step = sc.number("step");
  if (!(step > 0.0) || !(shi > slo)) sc.fail("step", "need a positive step and a nonempty range");
  std::int64_t paths = run.cfg.integer("paths");
  if (paths < 1) run.cfg.fail("paths", "at least one path is required");
  std::int64_t cap = run.cfg.integer("max_samples", 0);
  Section hs = run.cfg.child("histogram");
  std::int64_t bins = hs.integer("bins", 40);
  auto mu_r = hs.range("mu_range");
  auto nu_r = hs.range("nu_range");
  if (bins < 1 || !(mu_r.second > mu_r.first) || !(nu_r.second > nu_r.first))
    hs.fail("bins", "need at least one bin and nonempty ranges");

  Csv csv({"path", "x_star", "xi_minus", "xi_plus", "mu", "nu"});
  std::vector<double> mus, nus;
  std::int64_t bad = 0, used_paths = 0;
  for (std::int64_t i = 0; i < paths; ++i) {
    if (cap > 0 && static_cast<std::int64_t>(mus.size()) >= cap) break;
    ++used_paths;
    PiecewiseLinear psi = randstats::sample_potential(law, randstats::realization_seed(seed, i));
    for (const auto& q : randstats::find_shocks(psi, t, slo, shi, step)) {
      if (cap > 0 && static_cast<std::int64_t>(mus.size()) >= cap) break;
      csv.row().add(i).add(q.x_star).add(q.xi_minus).add(q.xi_plus).add(q.mu).add(q.nu);
      mus.push_back(q.mu);
      nus.push_back(q.nu);
      bad += q.mu > 0.0 ? 0 : 1;
    }
  }
  run.out.write("shocks.csv", csv.str());
  nlohmann::json js = nlohmann::json::object();
  for (auto [name, vals, r] : {std::tuple{std::string("mu"), &mus, mu_r}, std::tuple{std::string("nu"), &nus, nu_r}}) {
    auto h = randstats::histogram(*vals, r.first, r.second, static_cast<std::size_t>(bins));
    Csv hc({"lo", "hi", "count"});
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      hc.row().add(h.edges[b]).add(h.edges[b + 1]).add(static_cast<std::int64_t>(h.counts[b]));
    run.out.figure(name + "_histogram", svg_bars("histogram of " + name, name, h.edges, h.counts), hc.str());
    js[name] = {{"edges", h.edges}, {"counts", h.counts}, {"below", h.below}, {"above", h.above}};
  }
  run.out.write("histograms.json", js.dump(1) + "\n");
  run.summary = {{"samples", mus.size()}, {"paths", used_paths}, {"nonpositive_mu", bad}};
  return bad == 0 ? 0 : 1;
}

int cmd_crosscheck(Run& run) {
  Particles p = read_particles(run.cfg);
  std::vector<double> def;
  for (int i = 1; i <= 12; ++i) def.push_back(0.25 * i);
  std::vector<double> times = run.cfg.has("times") ? read_times(run.cfg) : run.cfg.numbers("times", def);
  double tol = read_tolerance(run, 1e-10);
  CrossCheckReport rep = crosscheck(p.measure(), p.u0(), times);
  Csv csv({"t", "solver", "index", "mass", "position", "velocity"});
  Csv gaps({"t", "counts_agree", "position_gap", "velocity_gap", "mass_gap"});
  for (const auto& row : rep.rows) {
    for (std::size_t s = 0; s < row.solvers.size(); ++s)
      for (std::size_t i = 0; i < row.solvers[s].size(); ++i) {
        const auto& c = row.solvers[s][i];
        csv.row().add(row.t).add(solver_names()[s]).add(i).add(c.mass).add(c.position).add(c.velocity);
      }
    gaps.row().add(row.t).add(row.counts_agree).add(row.position_gap).add(row.velocity_gap).add(row.mass_gap);
  }
  run.out.write("clusters.csv", csv.str());
  run.out.write("discrepancy.csv", gaps.str());
  bool ok = rep.counts_agree && rep.position_gap <= tol && rep.velocity_gap <= tol && rep.mass_gap <= tol;
  run.summary = {{"counts_agree", rep.counts_agree},
                 {"position_gap", rep.position_gap},
                 {"velocity_gap", rep.velocity_gap},
                 {"mass_gap", rep.mass_gap},
                 {"pass", ok}};
  return ok ? 0 : 1;
}

}  // namespace cli
