#pragma once

#include <limits>

namespace conslaw {

//! Interval of the line with explicit endpoint closure; lo == hi with both
//! ends closed is a singleton.
struct Interval {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  static Interval point(double x) { return {x, x, true, true}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval open(double a, double b) { return {a, b, false, false}; }

  bool contains(double x) const noexcept {
    bool above = lo_closed ? x >= lo : x > lo;
    bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }
  bool is_point() const noexcept { return lo == hi && lo_closed && hi_closed; }
  bool empty() const noexcept {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
  }
  double length() const noexcept { return hi - lo; }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace conslaw
