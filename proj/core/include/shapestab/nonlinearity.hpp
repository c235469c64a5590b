#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace shapestab {

/// Shape-preserving piecewise cubic Hermite interpolant (PCHIP slopes) with
/// exact antiderivative. Outside the knot range the value is clamped to the
/// nearest end value, so the derivative is zero there and the antiderivative
/// continues linearly.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double s) const;
  double derivative(double s) const;
  /// Integral from x.front() to s.
  double integral(double s) const;

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return y_; }

 private:
  std::size_t cell(double s) const;

  std::vector<double> x_, y_, m_;
  std::vector<double> cumulative_;  // integral from x_[0] to x_[i]
};

/// The reaction term f of -Δu = f(u), with f' and F(s) = ∫_0^s f.
class Nonlinearity {
 public:
  enum class Kind { torsion, lane_emden, linear, tabulated };

  /// f ≡ 1.
  static Nonlinearity torsion();
  /// f(s) = s|s|^{p-1}, p > 1 (the odd extension of s^p).
  static Nonlinearity lane_emden(double p);
  /// f(s) = slope * s + offset.
  static Nonlinearity linear(double slope, double offset);
  /// Monotone cubic through (s_i, f_i), clamped outside the table.
  static Nonlinearity tabulated(std::vector<double> s, std::vector<double> f);

  /// "torsion", "lane-emden:p", "linear:a,b" or "tabulated:<csv path>" where
  /// the CSV has two columns s,f and an optional header row.
  static Nonlinearity parse(std::string_view descriptor);

  double f(double s) const;
  double df(double s) const;
  double F(double s) const;

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return a_; }  // lane_emden
  double slope() const noexcept { return a_; }     // linear
  double offset() const noexcept { return b_; }    // linear

  /// True when f is known to be nonnegative and nondecreasing on [0, ∞).
  bool is_nonnegative_increasing() const noexcept;

  std::string descriptor() const;

 private:
  Nonlinearity(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::shared_ptr<const MonotoneCubic> table_;
  std::string source_;
};

}  // namespace shapestab
