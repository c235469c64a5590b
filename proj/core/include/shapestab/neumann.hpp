#pragma once

#include <string>
#include <string_view>

#include "shapestab/spectra.hpp"

namespace shapestab {

/// Cross-section whose first nontrivial Neumann eigenvalue is needed.
struct NeumannDomain {
  enum class Kind { interval, rectangle, disk, cap, sphere, explicit_value };
  Kind kind = Kind::interval;
  double a = 1.0;  // L, side a, R, θ₀ or the explicit value
  double b = 1.0;  // side b
  int dimension = 3;  // ambient N for cap and sphere

  static NeumannDomain interval(double length);
  static NeumannDomain rectangle(double a, double b);
  static NeumannDomain disk(double radius);
  static NeumannDomain cap(double theta0, int dimension);
  static NeumannDomain sphere(int dimension);
  static NeumannDomain explicit_lambda1(double value);

  /// `interval:L`, `rectangle:a,b`, `disk:R`, `cap:theta0,N`, `sphere:N`
  /// or `explicit:value`.
  static NeumannDomain parse(std::string_view text);

  std::string descriptor() const;
};

/// First nontrivial Neumann eigenvalue of the Laplacian (flat) or the
/// Laplace-Beltrami operator (cap, sphere). Throws SolverError for caps too
/// close to a point or to the whole sphere.
double neumann_lambda1(const NeumannDomain& d);

/// Lowest nonconstant Neumann mode of a geodesic cap {θ < θ₀} in S^{N-1}.
/// Both the first azimuthal family and the zonal family are solved and the
/// smaller value is returned; the profile g(θ) is sampled on s = θ/θ₀.
EigenResult cap_first_mode(double theta0, int dimension, const SpectrumOptions& opts = {});

/// First positive zero of J₁', by series evaluation and Brent.
double bessel_j1_prime_first_zero();

}  // namespace shapestab
