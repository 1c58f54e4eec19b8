#pragma once

#include <stdexcept>
#include <string>

namespace fedrank {

/// Raised for malformed or out-of-contract input. The CLI maps it to exit code 1.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails (exit code 2).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedrank
