#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace conslaw {

struct Atom {
  double location;
  double mass;
};

//! Finite sum of point masses on the line, sorted by location.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_mass() const noexcept;

  //! Mass of atoms between lo and hi; endpoint inclusion is explicit.
  double mass_between(double lo, double hi, bool include_lo,
                      bool include_hi) const;

 private:
  std::vector<Atom> atoms_;
};

enum class Continuity { left, right };

/*!
  Piecewise-constant function. values[i] holds on the open interval between
  breakpoints[i-1] and breakpoints[i]; at a breakpoint the function takes the
  one-sided limit named by the continuity convention.
*/
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values,
               Continuity side);

  static StepFunction constant(double value);

  double operator()(double x) const;
  double left_limit(double x) const;
  double right_limit(double x) const;

  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Continuity continuity() const noexcept { return side_; }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  Continuity side_;
};

struct Knot {
  double x;
  double value;
};

/*!
  Continuous piecewise-linear function through strictly increasing knots.

  Outside [front knot, back knot] the function either is undefined or
  continues linearly with an optional tail slope. Tails make the Legendre
  transform an exact involution: bounded domains become tail slopes of the
  conjugate and vice versa.
*/
class PiecewiseLinear {
 public:
  explicit PiecewiseLinear(std::vector<Knot> knots,
                           std::optional<double> left_tail = std::nullopt,
                           std::optional<double> right_tail = std::nullopt);

  //! Zero function on the whole line.
  static PiecewiseLinear zero();

  double operator()(double x) const;
  bool defined_at(double x) const noexcept;

  double domain_lo() const noexcept { return knots_.front().x; }
  double domain_hi() const noexcept { return knots_.back().x; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }
  std::optional<double> left_tail() const noexcept { return left_tail_; }
  std::optional<double> right_tail() const noexcept { return right_tail_; }

  //! Slopes of the segments between consecutive knots.
  std::vector<double> slopes() const;
  double left_derivative(double x) const;
  double right_derivative(double x) const;

  //! Slopes (tails included) nondecreasing up to a relative tolerance.
  bool is_convex(double rel_tol = 1e-12) const;

 private:
  std::vector<Knot> knots_;
  std::optional<double> left_tail_;
  std::optional<double> right_tail_;
};

struct Ramp {
  double coefficient;
  double threshold;
};

//! x -> sum c_i (x - a_i)_+ with tails of slope 0 and sum c_i.
PiecewiseLinear positive_part_sum(const std::vector<Ramp>& terms);

//! sup_x {x m - psi(x)}; throws non_convex for non-convex input.
PiecewiseLinear legendre_transform(const PiecewiseLinear& psi);

//! Greatest convex minorant, knots drawn from the input knots.
PiecewiseLinear lower_convex_hull(const PiecewiseLinear& f);

/*!
  Cumulative mass anchored at base: m0(x) = mass((base, x]) for x >= base
  and -mass((x, base]) for x < base. Right-continuous, jumps at atoms.
*/
StepFunction cumulative_mass(const AtomicMeasure& measure, double base = 0.0);

//! Atoms recovered from the jumps of a cumulative mass function.
AtomicMeasure jump_measure(const StepFunction& m0);

/*!
  Sum over atoms eta of m0 of (t u0(eta) + eta - x) mass(eta).

  Atoms count when eta lies in (base, y) for y > base and in [y, base) for
  y < base; nothing counts at y == base.
*/
double stieltjes_integral(const StepFunction& u0, const StepFunction& m0,
                          double y, double x, double t, double base = 0.0);

}  // namespace conslaw
