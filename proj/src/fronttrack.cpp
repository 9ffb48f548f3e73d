#include "conslaw/fronttrack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "conslaw/error.hpp"

namespace conslaw::fronttrack {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_point(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

}  // namespace

FluxTable::FluxTable(std::vector<double> states, std::vector<double> values)
    : states_(std::move(states)), values_(std::move(values)), convex_(true) {
  if (states_.empty() || states_.size() != values_.size())
    fail("FluxTable: need matching nonempty states and values");
  for (std::size_t k = 0; k < states_.size(); ++k) {
    if (!std::isfinite(states_[k]) || !std::isfinite(values_[k])) fail("FluxTable: non-finite entry");
    if (k > 0 && !(states_[k] > states_[k - 1])) fail("FluxTable: states must increase");
  }
  for (std::size_t k = 0; k + 1 < states_.size(); ++k) {
    slopes_.push_back((values_[k + 1] - values_[k]) / (states_[k + 1] - states_[k]));
  }
  for (std::size_t k = 1; k < slopes_.size(); ++k) {
    if (slopes_[k] < slopes_[k - 1] - 1e-12 * std::max(1.0, std::abs(slopes_[k - 1]))) convex_ = false;
  }
}

double FluxTable::speed(std::size_t l, std::size_t r) const {
  if (l >= size() || r >= size()) fail("FluxTable::speed: state index out of range");
  if (l == r) fail("FluxTable::speed: equal states");
  if (l + 1 == r || r + 1 == l) return slopes_[std::min(l, r)];
  return (values_[l] - values_[r]) / (states_[l] - states_[r]);
}

std::size_t FluxTable::index_of(double u) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), u);
  if (it == states_.end() || *it != u) fail("FluxTable::index_of: value is not a table state");
  return static_cast<std::size_t>(it - states_.begin());
}

std::vector<Front> riemann_solve(const FluxTable& flux, std::size_t l, std::size_t r, double x) {
  if (l >= flux.size() || r >= flux.size()) fail("riemann_solve: state outside the table");
  if (!flux.is_convex()) throw Error(ErrorCode::non_convex, "riemann_solve: flux is not convex");
  std::vector<Front> out;
  if (l > r) {
    out.push_back({x, l, r, flux.speed(l, r)});
  } else {
    for (std::size_t k = l; k < r; ++k) out.push_back({x, k, k + 1, flux.slopes()[k]});
  }
  return out;
}

FrontList from_blocks(const FluxTable& flux, const std::vector<double>& breaks,
                      const std::vector<std::size_t>& blocks, double t0) {
  if (blocks.size() != breaks.size() + 1) fail("from_blocks: need one more block than breaks");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1])) fail("from_blocks: breaks must increase");
  for (std::size_t b : blocks)
    if (b >= flux.size()) fail("from_blocks: state outside the table");
  FrontList fl;
  fl.time = t0;
  fl.far_left = blocks.front();
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    auto fan = riemann_solve(flux, blocks[i], blocks[i + 1], breaks[i]);
    fl.fronts.insert(fl.fronts.end(), fan.begin(), fan.end());
  }
  return fl;
}

FrontList FrontHistory::snapshot(double t) const {
  if (t < t0 || t > t1) fail("FrontHistory::snapshot: time outside the recorded range");
  struct Alive {
    double x;
    const Segment* s;
  };
  std::vector<Alive> alive;
  for (const Segment& s : segments) {
    if (s.t_birth <= t && t < s.t_death) alive.push_back({s.at(t), &s});
  }
  std::sort(alive.begin(), alive.end(), [](const Alive& a, const Alive& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.s->speed < b.s->speed;
  });
  // Rounding may swap two fronts an ulp apart just before they meet.
  for (std::size_t i = 0; i + 1 < alive.size(); ++i) {
    std::size_t expect = i == 0 ? far_left : alive[i - 1].s->right;
    if (alive[i].s->left != expect && alive[i + 1].s->left == expect &&
        same_point(alive[i].x, alive[i + 1].x)) {
      std::swap(alive[i], alive[i + 1]);
    }
  }
  FrontList fl;
  fl.time = t;
  fl.far_left = far_left;
  for (const Alive& a : alive) fl.fronts.push_back({a.x, a.s->left, a.s->right, a.s->speed});
  return fl;
}

double FrontHistory::first_interaction() const {
  double best = kInf;
  for (const Interaction& e : interactions) best = std::min(best, e.time);
  return best;
}

FrontHistory evolve_recorded(const FrontList& fl, const FluxTable& flux, double t) {
  if (t < fl.time) fail("evolve: target time precedes the current time");
  for (std::size_t i = 1; i < fl.fronts.size(); ++i) {
    if (fl.fronts[i].position < fl.fronts[i - 1].position) fail("evolve: fronts out of order");
    if (fl.fronts[i].left != fl.fronts[i - 1].right) fail("evolve: adjacent fronts disagree on state");
  }
  if (!fl.fronts.empty() && fl.fronts.front().left != fl.far_left) fail("evolve: far-left state mismatch");

  FrontHistory h{fl.time, t, fl.far_left, {}, {}};
  std::vector<std::size_t> prev, next;
  std::vector<bool> alive;
  auto add = [&](const Front& f, double tb) {
    h.segments.push_back({tb, f.position, kInf, f.left, f.right, f.speed});
    prev.push_back(npos);
    next.push_back(npos);
    alive.push_back(true);
    return h.segments.size() - 1;
  };
  for (const Front& f : fl.fronts) {
    std::size_t id = add(f, fl.time);
    if (id > 0) {
      prev[id] = id - 1;
      next[id - 1] = id;
    }
  }

  struct Event {
    double time;
    double position;
    std::size_t a;
    std::size_t b;
  };
  auto later = [](const Event& x, const Event& y) {
    if (x.time != y.time) return x.time > y.time;
    if (x.position != y.position) return x.position > y.position;
    return x.a > y.a;
  };
  std::priority_queue<Event, std::vector<Event>, decltype(later)> queue(later);
  double now = fl.time;
  auto schedule = [&](std::size_t a, std::size_t b) {
    if (a == npos || b == npos) return;
    const Segment& sa = h.segments[a];
    const Segment& sb = h.segments[b];
    if (!(sa.speed > sb.speed)) return;
    double te = (sb.x_birth - sa.x_birth + sa.speed * sa.t_birth - sb.speed * sb.t_birth) /
                (sa.speed - sb.speed);
    te = std::max(te, now);
    if (te <= t) queue.push({te, sa.at(te), a, b});
  };
  for (std::size_t i = 1; i < h.segments.size(); ++i) schedule(i - 1, i);

  while (!queue.empty()) {
    Event e = queue.top();
    queue.pop();
    if (!alive[e.a] || !alive[e.b] || next[e.a] != e.b) continue;
    now = e.time;
    double x = e.position;
    std::size_t lo = e.a;
    while (prev[lo] != npos && same_point(h.segments[prev[lo]].at(now), x)) lo = prev[lo];
    std::size_t hi = e.b;
    while (next[hi] != npos && same_point(h.segments[next[hi]].at(now), x)) hi = next[hi];
    std::size_t before = prev[lo];
    std::size_t after = next[hi];
    std::size_t incoming = 0;
    for (std::size_t id = lo;; id = next[id]) {
      alive[id] = false;
      h.segments[id].t_death = now;
      ++incoming;
      if (id == hi) break;
    }
    std::size_t l = h.segments[lo].left;
    std::size_t r = h.segments[hi].right;
    auto fan = riemann_solve(flux, l, r, x);
    std::size_t last = before;
    for (const Front& f : fan) {
      std::size_t id = add(f, now);
      prev[id] = last;
      if (last != npos) next[last] = id;
      last = id;
    }
    if (last != npos) next[last] = after;
    if (after != npos) prev[after] = last;
    h.interactions.push_back({now, x, l, r, incoming, fan.size()});
    if (fan.empty()) {
      schedule(before, after);
    } else {
      std::size_t first = h.segments.size() - fan.size();
      schedule(before, first);
      schedule(last, after);
    }
  }
  return h;
}

FrontList evolve(const FrontList& fl, const FluxTable& flux, double t) {
  return evolve_recorded(fl, flux, t).snapshot(t);
}

std::pair<std::size_t, std::size_t> sample(const FrontList& fl, double x) {
  std::size_t minus = fl.far_left;
  std::size_t plus = fl.far_left;
  for (const Front& f : fl.fronts) {
    if (f.position < x) minus = f.right;
    if (f.position <= x) plus = f.right;
    else break;
  }
  return {minus, plus};
}

double rh_residual(const FrontList& fl, const FluxTable& flux) {
  double worst = 0.0;
  for (const Front& f : fl.fronts) {
    double rh = (flux.flux(f.left) - flux.flux(f.right)) / (flux.state(f.left) - flux.state(f.right));
    worst = std::max(worst, std::abs(f.speed - rh));
  }
  return worst;
}

double total_variation(const FrontList& fl, const FluxTable& flux) {
  double tv = 0.0;
  for (const Front& f : fl.fronts) tv += std::abs(flux.state(f.left) - flux.state(f.right));
  return tv;
}

StickyCorrespondence from_particles(const sticky::ParticleSystem& sys) {
  const auto& ps = sys.particles();
  const std::size_t n = ps.size();
  for (std::size_t i = 1; i < n; ++i)
    if (ps[i].velocity > ps[i - 1].velocity) fail("from_particles: velocities must be nonincreasing");
  std::vector<double> M(n + 1, 0.0), A(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    M[i + 1] = M[i] + ps[i].mass;
    A[i + 1] = A[i] + ps[i].mass * ps[i].velocity;
  }
  std::vector<double> states(n + 1), values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    states[k] = -M[n - k];
    values[k] = -A[n - k];
  }
  FluxTable flux(states, values);
  std::vector<double> breaks;
  std::vector<std::size_t> blocks{n};
  for (std::size_t i = 0; i < n; ++i) {
    breaks.push_back(ps[i].position);
    blocks.push_back(n - i - 1);
  }
  return {flux, from_blocks(flux, breaks, blocks, sys.time())};
}

}  // namespace conslaw::fronttrack
