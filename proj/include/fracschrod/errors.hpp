#pragma once

#include <stdexcept>
#include <string>

namespace fracschrod {

/// Raised when inputs violate a documented precondition (bad ranges, size
/// mismatches). The CLI maps it to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails (non-convergence, breakdown,
/// instability, norm drift). The CLI maps it to exit code 1.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw InvalidArgument(message);
  }
}

} // namespace fracschrod
