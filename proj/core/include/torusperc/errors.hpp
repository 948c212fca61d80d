#pragma once

#include <stdexcept>
#include <string>

namespace torusperc {

/// Raised when a parameter or input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy answer,
/// e.g. a root bracket that contradicts the expected fixed-point structure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace torusperc
