#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rbslip {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (non-finite field, bad norm
/// exponent, non-positive parameter, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Neumann data whose mean constraint is violated, or an inconsistent state
/// handed to pressure recovery.
class IncompatibleData : public Error {
 public:
  using Error::Error;
};

/// Malformed file (snapshot, CSV, config).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or runaway values appeared during time integration.
class BlowUp : public Error {
 public:
  BlowUp(std::int64_t step, double time)
      : Error("blow-up: non-finite or runaway values at step " + std::to_string(step) +
              " (t = " + std::to_string(time) + ")"),
        step_(step),
        time_(time) {}

  std::int64_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::int64_t step_;
  double time_;
};

}  // namespace rbslip
