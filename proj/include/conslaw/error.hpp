#pragma once

#include <stdexcept>
#include <string>

namespace conslaw {

enum class ErrorCode {
  invalid_argument,
  non_convex,
  vacuum,
  blowup,
  domain_too_small,
  empty_ensemble,
};

//! Library error with a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

//! Thrown when 1 + t f''(y) b0(y) reaches zero.
class BlowupError : public Error {
 public:
  BlowupError(double critical_time, const std::string& what)
      : Error(ErrorCode::blowup, what), critical_time_(critical_time) {}

  double critical_time() const noexcept { return critical_time_; }

 private:
  double critical_time_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorCode::invalid_argument, what);
}

}  // namespace conslaw
