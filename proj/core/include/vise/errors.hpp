#pragma once

#include <stdexcept>
#include <string>

namespace vise {

/// Argument outside the mathematical domain of a numerical routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A distribution or voting parameter violates its constraints. The message
/// names the violated constraint, e.g. "k must exceed 2".
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine (quadrature, continued fraction) did not reach the
/// requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vise
