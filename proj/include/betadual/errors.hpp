#pragma once

#include <stdexcept>

namespace betadual {

/// A symbolic or numeric denominator vanished where a value was requested.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A truncated series operation would leave no valid coefficients, or would
/// need a coefficient beyond the tracked truncation order.
class OrderUnderflow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method (Newton polish, minimisation, quadrature) did not meet
/// its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace betadual
