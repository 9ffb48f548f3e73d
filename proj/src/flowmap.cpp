#include "conslaw/flowmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "conslaw/error.hpp"

namespace conslaw::flowmap {

double FlowMap::operator()(double y) const {
  for (const MapBranch& b : branches) {
    if (b.domain.contains(y)) return y + t * b.velocity;
  }
  fail("flow map has no branch at the requested point");
}

FlowMap forward_map(const StepFunction& u0, double t) {
  if (t < 0.0) fail("flow map time must be nonnegative");
  FlowMap map{t, {}};
  const auto& br = u0.breakpoints();
  const auto& v = u0.values();
  double lo = -kInf;
  for (std::size_t i = 0; i <= br.size(); ++i) {
    double hi = i < br.size() ? br[i] : kInf;
    map.branches.push_back({Interval::open(lo, hi), v[i]});
    if (i < br.size()) map.branches.push_back({Interval::point(hi), u0(hi)});
    lo = hi;
  }
  return map;
}

// -- partition ---------------------------------------------------------------

PointClass Partition::classify(double x) const {
  for (const Element& e : elements) {
    if (e.background) continue;
    if (std::abs(x - e.image) <= 1e-12 * std::max(1.0, std::abs(x)))
      return e.lagrangian.is_point() ? PointClass::regular : PointClass::shock;
  }
  for (const Interval& g : gaps) {
    if (g.contains(x)) return PointClass::gap;
  }
  return PointClass::regular;
}

std::optional<Interval> Partition::preimage(double x) const {
  for (const Element& e : elements) {
    if (e.background) continue;
    if (std::abs(x - e.image) <= 1e-12 * std::max(1.0, std::abs(x))) return e.lagrangian;
  }
  for (const Interval& g : gaps) {
    if (g.contains(x)) return std::nullopt;
  }
  return Interval::point(x);
}

const Element& Partition::element_of(double y) const {
  for (const Element& e : elements) {
    if (e.lagrangian.contains(y)) return e;
  }
  fail("partition does not cover the requested point");
}

double Partition::image(double y) const {
  const Element& e = element_of(y);
  return e.background ? y : e.image;
}

sticky::ParticleSystem initial_system(const AtomicMeasure& p0, const StepFunction& u0) {
  std::vector<double> m, x, v;
  for (const Atom& a : p0.atoms()) {
    m.push_back(a.mass);
    x.push_back(a.location);
    v.push_back(u0(a.location));
  }
  return sticky::ParticleSystem::from_arrays(m, x, v);
}

namespace {

struct Segment {
  double t0, x0, t1, x1;
};

// World-line of one atom as time-ordered straight segments.
struct Track {
  std::vector<Segment> segs;
  double max_x;
  double min_x;

  double first_reach_right(double y) const {
    for (const Segment& s : segs) {
      if (s.x0 >= y) return s.t0;
      if (s.x1 >= y) return s.t0 + (y - s.x0) / (s.x1 - s.x0) * (s.t1 - s.t0);
    }
    return kInf;
  }
  double first_reach_left(double y) const {
    for (const Segment& s : segs) {
      if (s.x0 <= y) return s.t0;
      if (s.x1 <= y) return s.t0 + (y - s.x0) / (s.x1 - s.x0) * (s.t1 - s.t0);
    }
    return kInf;
  }
};

std::vector<Track> atom_tracks(const sticky::Evolution& evo, std::size_t n) {
  std::vector<Track> tracks(n);
  for (const sticky::WorldLine& w : evo.lines) {
    for (std::size_t i = w.first_atom; i <= w.last_atom; ++i) {
      tracks[i].segs.push_back({w.t_birth, w.x_birth, w.t_end, w.x_end});
    }
  }
  for (Track& tr : tracks) {
    std::sort(tr.segs.begin(), tr.segs.end(),
              [](const Segment& a, const Segment& b) { return a.t0 < b.t0; });
    tr.max_x = -kInf;
    tr.min_x = kInf;
    for (const Segment& s : tr.segs) {
      tr.max_x = std::max({tr.max_x, s.x0, s.x1});
      tr.min_x = std::min({tr.min_x, s.x0, s.x1});
    }
  }
  return tracks;
}

struct Bound {
  double value;
  bool closed;
};

// Splits the open gap between atoms i and i+1 of different clusters into
// the part first swept by i, the untouched middle, and the part first swept
// by i+1. Returns (upper end of i's element, lower end of i+1's element).
std::pair<Bound, Bound> split_gap(double yi, double yj, const Track& ti, const Track& tj) {
  double a = std::min(ti.max_x, yj);
  double b = std::max(tj.min_x, yi);
  if (a < b) return {{a, true}, {b, true}};
  auto d = [&](double y) { return ti.first_reach_right(y) - tj.first_reach_left(y); };
  if (d(a) <= 0.0) {
    if (a == yj) return {{yj, false}, {yj, true}};
    return {{a, true}, {a, false}};
  }
  if (d(b) > 0.0) {
    if (b == yi) return {{yi, true}, {yi, false}};
    return {{b, false}, {b, true}};
  }
  double lo = b;
  double hi = a;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (d(mid) <= 0.0) lo = mid; else hi = mid;
  }
  return {{lo, true}, {lo, false}};
}

}  // namespace

Partition inverse_partition(const AtomicMeasure& p0, const StepFunction& u0, double t) {
  if (t < 0.0) fail("partition time must be nonnegative");
  Partition part{t, {}, {}};
  if (p0.empty()) {
    part.elements.push_back({Interval::open(-kInf, kInf), true, 0.0, 0.0, 0.0, 0, 0});
    return part;
  }
  const auto& atoms = p0.atoms();
  std::size_t n = atoms.size();
  sticky::Evolution evo = sticky::evolve_recorded(initial_system(p0, u0), t);
  std::vector<Track> tracks = atom_tracks(evo, n);
  const auto& clusters = evo.state.particles();

  auto background = [&part](Bound upper, Bound lower) {
    Interval iv{upper.value, lower.value, !upper.closed, !lower.closed};
    if (!iv.empty()) part.elements.push_back({iv, true, 0.0, 0.0, 0.0, 0, 0});
  };

  Bound prev_upper{-kInf, false};
  Bound start = tracks[0].min_x < atoms[0].location ? Bound{tracks[0].min_x, true}
                                                    : Bound{atoms[0].location, true};
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const sticky::Particle& cl = clusters[c];
    Bound end;
    Bound next_start{kInf, false};
    std::size_t i = cl.last_atom;
    if (c + 1 < clusters.size()) {
      auto [up, low] = split_gap(atoms[i].location, atoms[i + 1].location, tracks[i], tracks[i + 1]);
      end = up;
      next_start = low;
    } else {
      end = tracks[i].max_x > atoms[i].location ? Bound{tracks[i].max_x, true}
                                                : Bound{atoms[i].location, true};
    }
    background(prev_upper, start);
    part.elements.push_back({Interval{start.value, end.value, start.closed, end.closed}, false,
                             cl.position, cl.mass, cl.velocity, cl.first_atom, cl.last_atom});

    double lo = kInf;
    double hi = -kInf;
    for (std::size_t j = cl.first_atom; j <= cl.last_atom; ++j) {
      lo = std::min(lo, tracks[j].min_x);
      hi = std::max(hi, tracks[j].max_x);
    }
    if (lo < cl.position) part.gaps.push_back({lo, cl.position, true, false});
    if (cl.position < hi) part.gaps.push_back({cl.position, hi, false, true});

    prev_upper = end;
    start = next_start;
  }
  background(prev_upper, Bound{kInf, false});
  std::sort(part.gaps.begin(), part.gaps.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return part;
}

// -- generalized variational principle -------------------------------------

namespace {

struct Prefix {
  std::vector<double> mass;  // mass[k] = sum of the first k atoms
  std::vector<double> q;     // sum of mass * (eta + t u0(eta))
  std::vector<double> mu;    // sum of mass * u0(eta)

  Prefix(const AtomicMeasure& p0, const StepFunction& u0, double t) {
    mass.push_back(0.0);
    q.push_back(0.0);
    mu.push_back(0.0);
    for (const Atom& a : p0.atoms()) {
      double u = u0(a.location);
      mass.push_back(mass.back() + a.mass);
      q.push_back(q.back() + a.mass * (a.location + t * u));
      mu.push_back(mu.back() + a.mass * u);
    }
  }
  // Average free position over atoms [from, to).
  double avg(std::size_t from, std::size_t to) const {
    return (q[to] - q[from]) / (mass[to] - mass[from]);
  }
};

bool endpoint_at(const Prefix& pre, std::size_t i, std::size_t n) {
  if (i == 0 || i == n) return true;
  double left = -kInf;
  for (std::size_t j = 0; j < i; ++j) left = std::max(left, pre.avg(j, i));
  double right = kInf;
  for (std::size_t k = i + 1; k <= n; ++k) right = std::min(right, pre.avg(i, k));
  return left < right;
}

}  // namespace

bool left_endpoint_test(const AtomicMeasure& p0, const StepFunction& u0, double t,
                        double y) {
  const auto& atoms = p0.atoms();
  std::size_t i = static_cast<std::size_t>(
      std::lower_bound(atoms.begin(), atoms.end(), y,
                       [](const Atom& a, double v) { return a.location < v; }) -
      atoms.begin());
  return endpoint_at(Prefix(p0, u0, t), i, atoms.size());
}

std::vector<GvpCluster> gvp_clusters(const AtomicMeasure& p0, const StepFunction& u0,
                                     double t) {
  std::size_t n = p0.size();
  Prefix pre(p0, u0, t);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    if (endpoint_at(pre, i, n)) starts.push_back(i);
  }
  std::vector<GvpCluster> out;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::size_t a = starts[s];
    std::size_t b = s + 1 < starts.size() ? starts[s + 1] : n;
    double m = pre.mass[b] - pre.mass[a];
    out.push_back({a, b - 1, m, (pre.q[b] - pre.q[a]) / m, (pre.mu[b] - pre.mu[a]) / m});
  }
  return out;
}

GvpValue gvp_reconstruct(const AtomicMeasure& p0, const StepFunction& u0, double t,
                         double y) {
  Partition part = inverse_partition(p0, u0, t);
  const Element& e = part.element_of(y);
  if (e.background) throw Error(ErrorCode::vacuum, "partition element carries no mass");
  double m = 0.0, q = 0.0, mu = 0.0;
  for (std::size_t i = e.first_atom; i <= e.last_atom; ++i) {
    const Atom& a = p0.atoms()[i];
    double u = u0(a.location);
    m += a.mass;
    q += a.mass * (a.location + t * u);
    mu += a.mass * u;
  }
  return {q / m, mu / m};
}

namespace {

std::vector<std::size_t> signature(const AtomicMeasure& p0, const StepFunction& u0, double t) {
  std::vector<std::size_t> sig;
  for (const GvpCluster& c : gvp_clusters(p0, u0, t)) sig.push_back(c.first_atom);
  return sig;
}

}  // namespace

std::vector<double> clustering_changes(const AtomicMeasure& p0, const StepFunction& u0,
                                       double t1, double t2) {
  std::vector<double> out;
  // Clusters only ever coarsen, so equal structure at both ends of a
  // subinterval rules out any change inside it.
  std::function<void(double, double, const std::vector<std::size_t>&,
                     const std::vector<std::size_t>&)>
      rec = [&](double a, double b, const std::vector<std::size_t>& sa,
                const std::vector<std::size_t>& sb) {
        if (sa == sb) return;
        if (b - a <= 1e-14 * std::max(1.0, std::abs(b))) {
          out.push_back(b);
          return;
        }
        double mid = 0.5 * (a + b);
        auto sm = signature(p0, u0, mid);
        rec(a, mid, sa, sm);
        rec(mid, b, sm, sb);
      };
  rec(t1, t2, signature(p0, u0, t1), signature(p0, u0, t2));
  return out;
}

double Bump::operator()(double x) const {
  double s = (x - center) / radius;
  if (std::abs(s) >= 1.0) return 0.0;
  double w = 1.0 - s * s;
  return w * w * w * w;
}

double Bump::derivative(double x) const {
  double s = (x - center) / radius;
  if (std::abs(s) >= 1.0) return 0.0;
  double w = 1.0 - s * s;
  return -8.0 * s * w * w * w / radius;
}

WeakResidual weak_solution_residual(const AtomicMeasure& p0, const StepFunction& u0,
                                    double t1, double t2, const Bump& f, const Bump& g) {
  if (!(t1 < t2)) fail("weak residual needs t1 < t2");
  static constexpr std::array<double, 8> kNode{
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> kWeight{
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

  std::vector<double> cuts{t1};
  for (double c : clustering_changes(p0, u0, t1, t2)) {
    if (c > cuts.back() && c < t2) cuts.push_back(c);
  }
  cuts.push_back(t2);

  double flux_f = 0.0;
  double flux_g = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    double a = cuts[p];
    double b = cuts[p + 1];
    double mid = 0.5 * (a + b);
    std::vector<GvpCluster> cl = gvp_clusters(p0, u0, mid);
    // Split further where any cluster crosses a support edge.
    std::vector<double> sub{a, b};
    for (const GvpCluster& c : cl) {
      if (c.velocity == 0.0) continue;
      for (const Bump* bump : {&f, &g}) {
        for (double edge : {bump->center - bump->radius, bump->center + bump->radius}) {
          double tau = mid + (edge - c.position) / c.velocity;
          if (tau > a && tau < b) sub.push_back(tau);
        }
      }
    }
    std::sort(sub.begin(), sub.end());
    for (std::size_t s = 0; s + 1 < sub.size(); ++s) {
      double lo = sub[s];
      double hi = sub[s + 1];
      double half = 0.5 * (hi - lo);
      double centre = 0.5 * (hi + lo);
      for (std::size_t k = 0; k < kNode.size(); ++k) {
        double tau = centre + half * kNode[k];
        for (const GvpCluster& c : cl) {
          double x = c.position + c.velocity * (tau - mid);
          flux_f += half * kWeight[k] * c.mass * c.velocity * f.derivative(x);
          flux_g += half * kWeight[k] * c.mass * c.velocity * c.velocity * g.derivative(x);
        }
      }
    }
  }

  auto moments = [&](double t) {
    double pf = 0.0, ig = 0.0;
    for (const GvpCluster& c : gvp_clusters(p0, u0, t)) {
      pf += c.mass * f(c.position);
      ig += c.mass * c.velocity * g(c.position);
    }
    return std::pair{pf, ig};
  };
  auto [pf2, ig2] = moments(t2);
  auto [pf1, ig1] = moments(t1);
  return {(pf2 - pf1) - flux_f, (ig2 - ig1) - flux_g};
}

}  // namespace conslaw::flowmap
