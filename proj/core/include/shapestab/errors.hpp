#pragma once

#include <stdexcept>
#include <string>

namespace shapestab {

/// Base class for numerical failures. Precondition violations are reported
/// with std::invalid_argument instead.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string operation, const std::string& what)
      : std::runtime_error(operation + ": " + what), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

/// No sign change in a bracket, or a scan found no admissible bracket.
class BracketError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Iteration budget exhausted.
class ConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Adaptive step collapsed; usually a singularity or blow-up at time().
class StepSizeUnderflow : public SolverError {
 public:
  StepSizeUnderflow(std::string operation, double t)
      : SolverError(std::move(operation), "step size underflow at t=" + std::to_string(t)), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// The right-hand side produced inf/nan at time().
class NonFiniteState : public SolverError {
 public:
  NonFiniteState(std::string operation, double t)
      : SolverError(std::move(operation), "non-finite state at t=" + std::to_string(t)), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// A linear boundary-value problem whose homogeneous version has a
/// nontrivial solution.
class ResonanceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Sturm node counting could not isolate an eigenvalue.
class AmbiguousNodeCount : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace shapestab
