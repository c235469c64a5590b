#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shapestab {

/// dy/dt = rhs(t, y), written into `dydt`.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Scalar event function; integration stops at its first sign change.
using OdeEvent = std::function<double(double t, std::span<const double> y)>;

struct IvpOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  // 0 selects a step automatically
  std::size_t max_steps = 2'000'000;
  OdeEvent event;             // optional terminal event
  std::vector<double> stops;  // times every trajectory must land on exactly
  std::string operation = "integrate_ivp";  // used in error messages
};

/// Accepted steps of an embedded Runge-Kutta 5(4) solve together with the
/// fourth-order continuous extension on each step.
class Trajectory {
 public:
  Trajectory(std::size_t dimension, double rel_tol, double abs_tol);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> state(std::size_t i) const;
  double t_start() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  std::span<const double> final_state() const { return state(size() - 1); }

  /// Time of the terminal event, if one fired. t_end() equals it then.
  std::optional<double> event_time() const noexcept { return event_time_; }

  double rel_tol() const noexcept { return rel_tol_; }
  double abs_tol() const noexcept { return abs_tol_; }

  /// Dense output at t in [t_start, t_end].
  std::vector<double> at(double t) const;
  double component_at(double t, std::size_t c) const;

  /// Component `c` at increasing times `ts`.
  std::vector<double> sample(std::span<const double> ts, std::size_t c) const;

  // Used by the integrator.
  void push_start(double t, std::span<const double> y);
  void push_step(double t, std::span<const double> y, std::span<const double> dense);
  void truncate_at_event(double t);

 private:
  std::size_t segment_for(double t) const;
  double eval(std::size_t seg, double t, std::size_t c) const;

  std::size_t dim_;
  double rel_tol_;
  double abs_tol_;
  std::vector<double> times_;
  std::vector<double> states_;  // size() * dim_
  std::vector<double> dense_;   // (size() - 1) * 5 * dim_
  std::vector<double> steps_;   // step length of each segment
  std::optional<double> event_time_;
};

/// Adaptive Dormand-Prince 5(4) with dense output.
///
/// Throws std::invalid_argument for bad tolerances or t_end <= t_start,
/// StepSizeUnderflow when the step collapses, NonFiniteState when the state
/// overflows and ConvergenceError when max_steps is exhausted.
Trajectory integrate_ivp(const OdeRhs& rhs, double t_start, std::span<const double> y_start,
                         double t_end, const IvpOptions& options = {});

}  // namespace shapestab
