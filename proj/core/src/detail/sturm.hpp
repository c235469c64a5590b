#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "shapestab/ode.hpp"
#include "shapestab/roots.hpp"

namespace shapestab::detail {

// w'' + a(r) w' + b(r) w = 0 on [r0, r1] from (w0, dw0).
struct LinearProblem {
  std::function<double(double)> a;
  std::function<double(double)> b;
  double r0 = 0.0;
  double r1 = 1.0;
  double w0 = 1.0;
  double dw0 = 0.0;
};

inline IvpOptions tight_options(double rel_tol, double abs_tol, const std::string& op) {
  IvpOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  o.operation = op;
  return o;
}

inline Trajectory shoot_linear(const LinearProblem& lp, double rel_tol, double abs_tol, const std::string& op) {
  OdeRhs rhs = [&lp](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -lp.a(r) * y[1] - lp.b(r) * y[0];
  };
  const double y0[2] = {lp.w0, lp.dw0};
  return integrate_ivp(rhs, lp.r0, y0, lp.r1, tight_options(rel_tol, abs_tol, op));
}

// Prüfer angle φ with w = R sin φ, w' = R cos φ, continued from
// atan2(w0, dw0). Zeros of w sit at multiples of π and φ crosses them
// upward only, so floor(φ/π) counts zeros in (r0, r1].
inline double prufer_angle(const LinearProblem& lp, double rel_tol, double abs_tol, const std::string& op) {
  OdeRhs rhs = [&lp](double r, std::span<const double> y, std::span<double> dy) {
    const double s = std::sin(y[0]), c = std::cos(y[0]);
    dy[0] = c * c + lp.a(r) * s * c + lp.b(r) * s * s;
  };
  const double y0[1] = {std::atan2(lp.w0, lp.dw0)};
  const Trajectory tr = integrate_ivp(rhs, lp.r0, y0, lp.r1, tight_options(rel_tol, abs_tol, op));
  return tr.final_state()[0];
}

// Smallest root of an increasing target(μ) = angle(μ) - level in [lo, hi],
// with angle(lo) < level < angle(hi).
inline double solve_angle_level(const std::function<double(double)>& angle, double level, double lo, double hi,
                                double tol) {
  return find_root([&](double mu) { return angle(mu) - level; }, lo, hi, tol, 300);
}

}  // namespace shapestab::detail
