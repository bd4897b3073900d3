#pragma once

#include <stdexcept>
#include <string>

namespace solenoid {

/// Caller supplied a value outside an operation's documented domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well formed but the operation has no finite realization for it
/// (e.g. the isometric quotient metric requested on a non-isometric torus).
class UnsupportedInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A measure query outside the locally-product regime r <= 1/2.
class OutOfRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace solenoid
