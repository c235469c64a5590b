#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shapestab/profile.hpp"
#include "shapestab/spectra.hpp"

namespace shapestab {

/// Factor h_j of the shape derivative along a Neumann mode with eigenvalue
/// `lambda`, normalized by h(1) = -u'(1).
struct HProfile {
  Geometry geometry = Geometry::cylinder;
  double lambda = 0.0;
  Grid grid = Grid::uniform(2);
  std::vector<double> h;
  double dh_at_1 = 0.0;
  double h_at_0 = 0.0;
  double exponent = 0.0;  // cone: h ~ r^γ at the origin; 0 for the cylinder
  /// ∫₀¹ r^{N-3} h u' (cone) or ∫₀¹ h u' (cylinder), accumulated along the
  /// shooting solve. When empty, grid quadrature is used instead.
  std::optional<double> moment;
};

struct LinearSolveOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double launch_eps = 1e-6;
  double resonance_threshold = 1e-12;
};

/// -h'' - (N-1)/r h' - f'(u) h = -λ h / r², h(1) = -u'(1), bounded at 0.
/// Throws ResonanceError when the homogeneous problem is (nearly) solvable.
HProfile solve_h_cone(const Profile& p, double lambda, const LinearSolveOptions& opts = {});

/// -h'' - f'(u) h = -λ h, h'(0) = 0, h(1) = -u'(1). λ = 0 is accepted.
HProfile solve_h_cylinder(const Profile& p, double lambda, const LinearSolveOptions& opts = {});

/// Dispatches on the profile geometry.
HProfile solve_h(const Profile& p, double lambda, const LinearSolveOptions& opts = {});

/// Second variation on the normalized mode:
///   cone      -u'(1) (h'(1) + u''(1))
///   cylinder  -u'(1) h'(1) + u'(1) f(0)
double mode_second_variation(Geometry geometry, const Profile& p, const HProfile& h);

/// ρ = -f(u(0)) h(0) - λ ∫₀¹ h u'.
double rho_index(const Profile& p, const HProfile& h);

/// |-u'(1)(h'(1) + u''(1)) - (N-1-λ) ∫₀¹ r^{N-3} h u'|.
double cone_identity_residual(const Profile& p, const HProfile& h);

/// |-h'(1)u'(1) - (-f(0)u'(1) - f(u(0))h(0) - λ ∫₀¹ h u')|.
double cylinder_identity_residual(const Profile& p, const HProfile& h);

/// μ = -u'(1)²/2.
double lagrange_multiplier(const Profile& p);

enum class Verdict { stable, unstable, marginal, indeterminate };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& text);

constexpr double kMarginalBand = 1e-8;

struct StabilityReport {
  Geometry geometry = Geometry::cylinder;
  std::optional<int> dimension;             // cone only
  double lambda1 = 0.0;
  std::optional<double> first_eigenvalue;   // ν̂₁ or α₁; empty means "nonnegative"
  std::optional<double> d1;                 // empty when the h problem is resonant
  std::optional<double> rho;                // cylinder only
  std::optional<double> identity_residual;
  double mu = 0.0;
  Verdict verdict = Verdict::indeterminate;
  std::string theorem_basis;

  friend bool operator==(const StabilityReport&, const StabilityReport&) = default;
};

/// Threshold test for a spherical sector: unstable for -ν̂₁ < λ₁ < N-1,
/// stable above N-1, marginal within 1e-8 of N-1, indeterminate when
/// λ₁ <= -ν̂₁ or the radial solution is degenerate.
StabilityReport classify_cone(const Nonlinearity& nl, int dimension, double lambda1, const ShootConfig& cfg = {});
StabilityReport classify_cone(const Profile& p, double lambda1);

/// Cylinder test by the sign of ρ when λ₁ > -α₁ (indeterminate otherwise).
/// theorem_basis also records the sufficient condition
/// λ₁ > max{-α₁, ‖f'(u)‖∞} (f(0) = 0 only) and, for torsion, the side of β.
StabilityReport classify_cylinder(const Nonlinearity& nl, double lambda1, const ShootConfig& cfg = {});
StabilityReport classify_cylinder(const Profile& p, double lambda1);

/// True when f(0) = 0 and λ₁ > max{-α₁, ‖f'(u)‖∞}; for nonnegative
/// nondecreasing f the sup norm is f'(u(0)).
bool cylinder_sufficient_condition(const Profile& p, double alpha1, double lambda1);

/// Positive root of √t tanh √t = 1.
double torsion_beta();

struct SweepRow {
  double lambda1 = 0.0;
  double rho = 0.0;
  Verdict verdict = Verdict::marginal;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<std::pair<double, double>> bracket;  // first sign change
  std::optional<double> crossing;                     // refined root of ρ in the bracket
  int sign_changes = 0;
};

/// `steps` equally spaced λ₁ values from lo to hi inclusive (steps = 1 gives
/// the single row at lo). Requires lo > max(0, -α₁). Rows are computed
/// concurrently.
SweepResult sweep_rho(const Nonlinearity& nl, double lambda_lo, double lambda_hi, int steps,
                      const ShootConfig& cfg = {});
SweepResult sweep_rho(const Profile& p, double lambda_lo, double lambda_hi, int steps);

struct MonotonicityResult {
  bool monotone = true;
  std::optional<std::pair<double, double>> witness;  // violating (λ_j, λ_k)
  std::vector<double> dh_at_1;
};

/// Checks that h'(1) increases along the ascending list (violation when it
/// drops by more than 1e-9; repeated λ must agree within 1e-12).
MonotonicityResult hprime_monotonicity_check(const Profile& p, std::span<const double> lambdas,
                                             const LinearSolveOptions& opts = {});

}  // namespace shapestab
