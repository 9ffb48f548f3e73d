#include "conslaw/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "conslaw/error.hpp"

namespace conslaw::randstats {

using fronttrack::Front;
using fronttrack::FrontList;

namespace {

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
  }
  double mean(std::size_t n) const { return sum / static_cast<double>(n); }
  //! Sample standard deviation of the mean.
  double stderr_(std::size_t n) const {
    if (n < 2) return std::numeric_limits<double>::infinity();
    double nn = static_cast<double>(n);
    double var = (sumsq - sum * sum / nn) / (nn - 1.0);
    return std::sqrt(std::max(0.0, var) / nn);
  }
};

void require_nonempty(const Ensemble& e) {
  if (e.runs.empty()) throw Error(ErrorCode::empty_ensemble, "ensemble has no realizations");
}

void require_time(const Ensemble& e, double lo, double hi) {
  if (lo < e.runs.front().t0 || hi > e.t_end) fail("ensemble: stencil leaves the recorded time range");
}

bool in(double p, double a, double b) { return p >= a && p < b; }

}  // namespace

double Ensemble::first_interaction() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) best = std::min(best, r.first_interaction());
  return best;
}

FrontList to_fronts(const StepFunction& u0, const fronttrack::FluxTable& flux) {
  std::vector<std::size_t> blocks;
  for (double v : u0.values()) blocks.push_back(flux.index_of(v));
  return fronttrack::from_blocks(flux, u0.breakpoints(), blocks);
}

Ensemble run_ensemble(const InitialLaw& law, const fronttrack::FluxTable& flux, std::size_t n,
                      std::uint64_t seed, double t_end, unsigned workers) {
  validate(law);
  if (!(t_end >= 0.0)) fail("run_ensemble: t_end must be nonnegative");
  Ensemble e{flux, seed, t_end, std::vector<fronttrack::FrontHistory>(n)};
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::exception_ptr> errors(workers);
  auto job = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < n; i += workers) {
        StepFunction u0 = sample_initial(law, realization_seed(seed, i));
        e.runs[i] = fronttrack::evolve_recorded(to_fronts(u0, flux), flux, t_end);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return e;
}

NPointEstimate estimate_p1(const Ensemble& e, double t, const std::vector<double>& grid) {
  require_nonempty(e);
  require_time(e, t, t);
  const std::size_t M = e.flux.size();
  const std::size_t N = e.runs.size();
  NPointEstimate est{Interpretation::p1, grid, M, N, 0.0,
                     std::vector<std::vector<std::uint64_t>>(grid.size(), std::vector<std::uint64_t>(M, 0)),
                     {}, {}};
  for (const auto& run : e.runs) {
    FrontList s = run.snapshot(t);
    for (std::size_t g = 0; g < grid.size(); ++g) ++est.counts[g][fronttrack::sample(s, grid[g]).first];
  }
  double nn = static_cast<double>(N);
  for (const auto& row : est.counts) {
    std::vector<double> val, err;
    for (std::uint64_t c : row) {
      double p = static_cast<double>(c) / nn;
      val.push_back(p);
      err.push_back(N > 1 ? std::sqrt(p * (1.0 - p) / (nn - 1.0)) : std::numeric_limits<double>::infinity());
    }
    est.value.push_back(val);
    est.stderr_.push_back(err);
  }
  return est;
}

NPointEstimate estimate_p2(const Ensemble& e, double t, const std::vector<double>& grid,
                           double window) {
  require_nonempty(e);
  require_time(e, t, t);
  const std::size_t M = e.flux.size();
  const std::size_t N = e.runs.size();
  if (!(window > 0.0)) {
    double span = grid.size() > 1 ? grid.back() - grid.front() : 1.0;
    window = span / std::sqrt(static_cast<double>(N));
  }
  NPointEstimate est{Interpretation::p2_density, grid, M, N, window,
                     std::vector<std::vector<std::uint64_t>>(grid.size(), std::vector<std::uint64_t>(M * M, 0)),
                     {}, {}};
  std::vector<std::vector<Moments>> mom(grid.size(), std::vector<Moments>(M * M));
  std::vector<std::uint64_t> local(M * M);
  for (const auto& run : e.runs) {
    FrontList s = run.snapshot(t);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::fill(local.begin(), local.end(), 0);
      for (const Front& f : s.fronts)
        if (in(f.position, grid[g], grid[g] + window)) ++local[f.left * M + f.right];
      for (std::size_t q = 0; q < M * M; ++q) {
        est.counts[g][q] += local[q];
        mom[g][q].add(static_cast<double>(local[q]));
      }
    }
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> val, err;
    for (std::size_t q = 0; q < M * M; ++q) {
      val.push_back(mom[g][q].mean(N) / window);
      err.push_back(mom[g][q].stderr_(N) / window);
    }
    est.value.push_back(val);
    est.stderr_.push_back(err);
  }
  return est;
}

HierarchyResult hierarchy_residual_first(const Ensemble& e, std::size_t k, double x, double t,
                                         double dt, double w) {
  require_nonempty(e);
  if (k + 1 >= e.flux.size()) fail("hierarchy_residual_first: level out of range");
  if (!(dt > 0.0) || !(w > 0.0)) fail("hierarchy_residual_first: dt and w must be positive");
  require_time(e, t - dt, t + dt);
  const double ck = e.flux.slopes()[k];
  Moments lhs, rhs, res;
  for (const auto& run : e.runs) {
    double above_plus = fronttrack::sample(run.snapshot(t + dt), x).first > k ? 1.0 : 0.0;
    double above_minus = fronttrack::sample(run.snapshot(t - dt), x).first > k ? 1.0 : 0.0;
    double l = (above_plus - above_minus) / (2.0 * dt);
    double net = 0.0;
    for (const Front& f : run.snapshot(t).fronts) {
      if (!in(f.position, x, x + w)) continue;
      if (f.left > k && f.right <= k) net += 1.0;
      if (f.left <= k && f.right > k) net -= 1.0;
    }
    double r = ck * net / w;
    lhs.add(l);
    rhs.add(r);
    res.add(l - r);
  }
  std::size_t N = e.runs.size();
  return {lhs.mean(N), rhs.mean(N), res.mean(N), res.stderr_(N), t + dt < e.first_interaction(), N < 30};
}

HierarchyResult hierarchy_residual_second(const Ensemble& e, std::size_t u, std::size_t v,
                                          double x, double t, double dt, double h, double delta) {
  require_nonempty(e);
  const auto& flux = e.flux;
  if (u >= flux.size() || v >= flux.size() || u == v) fail("hierarchy_residual_second: bad front type");
  if (!(dt > 0.0) || !(h > 0.0) || !(delta > 0.0)) fail("hierarchy_residual_second: bad stencil");
  require_time(e, t - dt, t + dt);
  const double c = flux.speed(u, v);
  auto creates = [&](std::size_t l, std::size_t r) {
    if (l == r) return false;
    for (const Front& f : fronttrack::riemann_solve(flux, l, r))
      if (f.left == u && f.right == v) return true;
    return false;
  };
  auto count = [&](const FrontList& s, double a, double b) {
    double n = 0.0;
    for (const Front& f : s.fronts)
      if (f.left == u && f.right == v && in(f.position, a, b)) n += 1.0;
    return n;
  };
  Moments lhs, rhs, res;
  for (const auto& run : e.runs) {
    double later = count(run.snapshot(t + dt), x + c * dt, x + c * dt + h);
    double earlier = count(run.snapshot(t - dt), x - c * dt, x - c * dt + h);
    double l = (later - earlier) / (2.0 * dt * h);
    double r = 0.0;
    const auto fr = run.snapshot(t).fronts;
    for (std::size_t j = 0; j + 1 < fr.size(); ++j) {
      const Front& a = fr[j];
      const Front& b = fr[j + 1];
      double closing = a.speed - b.speed;
      double sep = b.position - a.position;
      if (!(closing > 0.0) || !(sep < delta)) continue;
      double rate = closing / (h * delta);
      bool left_in = in(a.position, x, x + h);
      if (left_in && creates(a.left, b.right)) r += rate;
      if (left_in && a.left == u && a.right == v) r -= rate;
      if (in(b.position, x, x + h) && b.left == u && b.right == v) r -= rate;
    }
    lhs.add(l);
    rhs.add(r);
    res.add(l - r);
  }
  std::size_t N = e.runs.size();
  return {lhs.mean(N), rhs.mean(N), res.mean(N), res.stderr_(N), t + dt < e.first_interaction(), N < 30};
}

}  // namespace conslaw::randstats
