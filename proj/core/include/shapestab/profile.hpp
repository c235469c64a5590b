#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "shapestab/grid.hpp"
#include "shapestab/nonlinearity.hpp"

namespace shapestab {

enum class Geometry { cone, cylinder };

std::string to_string(Geometry g);
Geometry parse_geometry(const std::string& text);

/// Background solution on [0, 1]: radial in the ball/cone
/// (-u'' - (N-1)/r u' = f(u)) or one-dimensional in the cylinder
/// (-u'' = f(u)), with u'(0) = 0 and u(1) = 0.
struct Profile {
  Geometry geometry = Geometry::cylinder;
  int dimension = 1;  // N for the cone; 1 for the one-dimensional problem
  Grid grid = Grid::uniform(2);
  std::vector<double> u;
  std::vector<double> du;
  double u_at_0 = 0.0;
  double du_at_1 = 0.0;
  double d2u_at_1 = 0.0;
  Nonlinearity nonlinearity = Nonlinearity::torsion();
  std::pair<double, double> shooting_bracket{0.0, 0.0};

  /// Exponent of the radial measure: N-1 for the cone, 0 for the cylinder.
  int weight_exponent() const noexcept { return geometry == Geometry::cone ? dimension - 1 : 0; }

  /// Cubic Hermite interpolation of u from the (u, du) samples.
  double value_at(double r) const;
};

struct ShootConfig {
  double u0_lo = 1e-4;
  double u0_hi = 1e4;
  int scan_points = 97;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  std::size_t grid_nodes = 1025;
  double launch_eps = 1e-6;
  /// Lane-Emden only: shoot θ(0)=1 once and rescale instead of scanning.
  bool use_scaling = true;
  /// Lane-Emden scaling search range for the first zero of θ.
  double scaling_r_max = 1e3;
};

/// Radial positive solution in the unit ball (cone over any D), N >= 2.
/// Throws BracketError when no u(0) in the bracket has its first zero at r=1.
Profile solve_radial(const Nonlinearity& nl, int dimension, const ShootConfig& cfg = {});

/// One-dimensional positive solution of -u'' = f(u), u'(0) = u(1) = 0.
Profile solve_1d(const Nonlinearity& nl, const ShootConfig& cfg = {});

/// ½∫ f(u)u w - ∫ F(u) w with w = r^{N-1} (cone, per unit measure of D) or
/// w = 1 (cylinder, per unit measure of ω). Composite Simpson on the grid.
double energy(const Profile& p);

/// (u'(1), u''(1)) with u''(1) taken from the ODE at r = 1.
std::pair<double, double> boundary_data(const Profile& p);

/// Max over interior nodes of |u'' + m u'/r + f(u)| with u'' from a
/// fourth-order finite difference of the du samples.
double ode_residual(const Profile& p);

/// CSV with header `r,u,du`, one row per node, "%.17g".
void write_profile_csv(std::ostream& out, const Profile& p);

}  // namespace shapestab
