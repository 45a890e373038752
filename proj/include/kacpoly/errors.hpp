#pragma once

#include <stdexcept>
#include <string>

namespace kacpoly {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures of an iterative numerical stage (quadrature, eigen
/// solver, ODE integration). The CLI maps these to exit code 2.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class EigenFailure : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// Trajectory left the admissible radius during a return-map integration.
class Escape : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// No crossing of the positive x-axis within the arc-time budget.
class NoReturn : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// The ODE fixed-point count did not stabilise over the epsilon schedule.
class NonConvergent : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class DegreeTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroPolynomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kacpoly
