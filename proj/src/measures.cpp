#include "conslaw/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "conslaw/error.hpp"

namespace conslaw {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.location) || !std::isfinite(a.mass))
      fail("atom " + std::to_string(i) + " is not finite");
    if (!(a.mass > 0.0))
      fail("atom " + std::to_string(i) + " has non-positive mass");
    if (i > 0 && !(atoms_[i - 1].location < a.location))
      fail("atom locations must be strictly increasing");
  }
}

double AtomicMeasure::total_mass() const noexcept {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  return total;
}

double AtomicMeasure::mass_between(double lo, double hi, bool include_lo,
                                   bool include_hi) const {
  double total = 0.0;
  for (const Atom& a : atoms_) {
    bool above = include_lo ? a.location >= lo : a.location > lo;
    bool below = include_hi ? a.location <= hi : a.location < hi;
    if (above && below) total += a.mass;
  }
  return total;
}

// -- StepFunction ----------------------------------------------------------

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> values, Continuity side)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), side_(side) {
  if (values_.size() != breaks_.size() + 1)
    fail("step function needs one more value than breakpoints");
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i - 1] < breaks_[i]))
      fail("step function breakpoints must be strictly increasing");
  }
}

StepFunction StepFunction::constant(double value) {
  return StepFunction({}, {value}, Continuity::right);
}

double StepFunction::left_limit(double x) const {
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double StepFunction::right_limit(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double StepFunction::operator()(double x) const {
  return side_ == Continuity::left ? left_limit(x) : right_limit(x);
}

// -- PiecewiseLinear -------------------------------------------------------

namespace {

// Points within rounding of a domain end are treated as the end itself.
bool near(double x, double end) {
  return std::abs(x - end) <= 1e-12 * std::max(1.0, std::abs(end));
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<Knot> knots,
                                 std::optional<double> left_tail,
                                 std::optional<double> right_tail)
    : knots_(std::move(knots)), left_tail_(left_tail), right_tail_(right_tail) {
  if (knots_.empty()) fail("piecewise-linear function needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].x) || !std::isfinite(knots_[i].value))
      fail("piecewise-linear knot is not finite");
    if (i > 0 && !(knots_[i - 1].x < knots_[i].x))
      fail("piecewise-linear knots must be strictly increasing");
  }
}

PiecewiseLinear PiecewiseLinear::zero() {
  return PiecewiseLinear({{0.0, 0.0}}, 0.0, 0.0);
}

bool PiecewiseLinear::defined_at(double x) const noexcept {
  if (x < domain_lo()) return left_tail_.has_value() || near(x, domain_lo());
  if (x > domain_hi()) return right_tail_.has_value() || near(x, domain_hi());
  return true;
}


double PiecewiseLinear::operator()(double x) const {
  const Knot& first = knots_.front();
  const Knot& last = knots_.back();
  if (x < first.x && !left_tail_ && near(x, first.x)) return first.value;
  if (x > last.x && !right_tail_ && near(x, last.x)) return last.value;
  if (x < first.x) {
    if (!left_tail_) fail("evaluation left of the domain");
    return first.value + *left_tail_ * (x - first.x);
  }
  if (x > last.x) {
    if (!right_tail_) fail("evaluation right of the domain");
    return last.value + *right_tail_ * (x - last.x);
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                             [](const Knot& k, double v) { return k.x < v; });
  if (it->x == x) return it->value;
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  double w = (x - a.x) / (b.x - a.x);
  return a.value + w * (b.value - a.value);
}

std::vector<double> PiecewiseLinear::slopes() const {
  std::vector<double> s;
  s.reserve(knots_.size() > 0 ? knots_.size() - 1 : 0);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    s.push_back((knots_[i].value - knots_[i - 1].value) /
                (knots_[i].x - knots_[i - 1].x));
  }
  return s;
}

double PiecewiseLinear::left_derivative(double x) const {
  if (x <= domain_lo()) {
    if (!left_tail_) fail("no left derivative at the domain start");
    return *left_tail_;
  }
  if (x > domain_hi()) {
    if (!right_tail_) fail("evaluation right of the domain");
    return *right_tail_;
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                             [](const Knot& k, double v) { return k.x < v; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  return (b.value - a.value) / (b.x - a.x);
}

double PiecewiseLinear::right_derivative(double x) const {
  if (x >= domain_hi()) {
    if (!right_tail_) fail("no right derivative at the domain end");
    return *right_tail_;
  }
  if (x < domain_lo()) {
    if (!left_tail_) fail("evaluation left of the domain");
    return *left_tail_;
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  return (b.value - a.value) / (b.x - a.x);
}

bool PiecewiseLinear::is_convex(double rel_tol) const {
  std::vector<double> s;
  if (left_tail_) s.push_back(*left_tail_);
  for (double v : slopes()) s.push_back(v);
  if (right_tail_) s.push_back(*right_tail_);
  for (std::size_t i = 1; i < s.size(); ++i) {
    double scale = std::max({1.0, std::abs(s[i]), std::abs(s[i - 1])});
    if (s[i] < s[i - 1] - rel_tol * scale) return false;
  }
  return true;
}

// -- operations ------------------------------------------------------------

PiecewiseLinear positive_part_sum(const std::vector<Ramp>& terms) {
  if (terms.empty()) return PiecewiseLinear::zero();
  std::map<double, double> grouped;
  for (const Ramp& r : terms) grouped[r.threshold] += r.coefficient;

  std::vector<Knot> knots;
  knots.reserve(grouped.size());
  double slope = 0.0;
  double value = 0.0;
  double prev = grouped.begin()->first;
  for (const auto& [a, c] : grouped) {
    value += slope * (a - prev);
    knots.push_back({a, value});
    slope += c;
    prev = a;
  }
  return PiecewiseLinear(std::move(knots), 0.0, slope);
}

PiecewiseLinear legendre_transform(const PiecewiseLinear& psi) {
  if (!psi.is_convex())
    throw Error(ErrorCode::non_convex, "legendre transform of a non-convex function");

  const auto& k = psi.knots();
  std::vector<double> s = psi.slopes();
  // Slopes of the input become knots of the conjugate; the maximizer over
  // slope s_j is any point of segment j, so take its right knot.
  std::vector<Knot> out;
  auto push = [&out](double m, double value) {
    if (!out.empty() && !(m > out.back().x)) return;
    out.push_back({m, value});
  };
  if (psi.left_tail()) push(*psi.left_tail(), k.front().x * *psi.left_tail() - k.front().value);
  for (std::size_t j = 0; j < s.size(); ++j) {
    push(s[j], k[j + 1].x * s[j] - k[j + 1].value);
  }
  if (psi.right_tail()) push(*psi.right_tail(), k.back().x * *psi.right_tail() - k.back().value);

  std::optional<double> left;
  std::optional<double> right;
  if (!psi.left_tail()) left = k.front().x;
  if (!psi.right_tail()) right = k.back().x;
  if (out.empty()) {
    // A single point with no tails: the conjugate is the affine m x0 - psi(x0).
    out.push_back({0.0, -k.front().value});
  }
  return PiecewiseLinear(std::move(out), left, right);
}

namespace {

// Cross product sign test for the lower hull: positive iff b lies strictly
// below the chord from a to c, with a relative tolerance.
bool strictly_below_chord(const Knot& a, const Knot& b, const Knot& c) {
  double lhs = (b.x - a.x) * (c.value - a.value);
  double rhs = (b.value - a.value) * (c.x - a.x);
  double scale = std::abs(lhs) + std::abs(rhs);
  return lhs - rhs > 1e-13 * scale;
}

}  // namespace

PiecewiseLinear lower_convex_hull(const PiecewiseLinear& f) {
  const auto& k = f.knots();
  std::size_t first = 0;
  std::size_t last = k.size() - 1;
  auto lt = f.left_tail();
  auto rt = f.right_tail();
  if (lt && rt && *lt > *rt)
    fail("lower convex hull is -infinity: left tail steeper than right tail");
  // A tail of slope L supports the hull at the knot minimizing f - L x.
  if (lt) {
    for (std::size_t i = 1; i < k.size(); ++i) {
      double cand = k[i].value - *lt * k[i].x;
      double best = k[first].value - *lt * k[first].x;
      if (cand <= best + 1e-13 * (std::abs(cand) + std::abs(best))) first = i;
    }
  }
  if (rt) {
    for (std::size_t i = k.size() - 1; i-- > 0;) {
      double cand = k[i].value - *rt * k[i].x;
      double best = k[last].value - *rt * k[last].x;
      if (cand <= best + 1e-13 * (std::abs(cand) + std::abs(best))) last = i;
    }
  }
  if (first > last) first = last;

  std::vector<Knot> hull;
  for (std::size_t i = first; i <= last; ++i) {
    while (hull.size() >= 2 &&
           !strictly_below_chord(hull[hull.size() - 2], hull.back(), k[i])) {
      hull.pop_back();
    }
    hull.push_back(k[i]);
  }
  return PiecewiseLinear(std::move(hull), lt, rt);
}

StepFunction cumulative_mass(const AtomicMeasure& measure, double base) {
  const auto& atoms = measure.atoms();
  double left_of_base = measure.mass_between(
      -std::numeric_limits<double>::infinity(), base, false, true);
  std::vector<double> breaks;
  std::vector<double> values;
  breaks.reserve(atoms.size());
  values.reserve(atoms.size() + 1);
  double running = -left_of_base;
  values.push_back(running);
  for (const Atom& a : atoms) {
    breaks.push_back(a.location);
    running += a.mass;
    values.push_back(running);
  }
  return StepFunction(std::move(breaks), std::move(values), Continuity::right);
}

AtomicMeasure jump_measure(const StepFunction& m0) {
  std::vector<Atom> atoms;
  const auto& b = m0.breakpoints();
  const auto& v = m0.values();
  for (std::size_t i = 0; i < b.size(); ++i) {
    double jump = v[i + 1] - v[i];
    if (jump < 0.0) fail("cumulative mass function must be nondecreasing");
    if (jump > 0.0) atoms.push_back({b[i], jump});
  }
  return AtomicMeasure(std::move(atoms));
}

double stieltjes_integral(const StepFunction& u0, const StepFunction& m0,
                          double y, double x, double t, double base) {
  if (y == base) return 0.0;
  const auto& b = m0.breakpoints();
  const auto& v = m0.values();
  double total = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double eta = b[i];
    bool counted = y > base ? (eta > base && eta < y) : (eta >= y && eta < base);
    if (!counted) continue;
    double mass = v[i + 1] - v[i];
    total += (t * u0(eta) + eta - x) * mass;
  }
  return total;
}

}  // namespace conslaw
