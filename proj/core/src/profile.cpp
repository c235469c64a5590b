#include "shapestab/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "shapestab/errors.hpp"
#include "shapestab/format.hpp"
#include "shapestab/ode.hpp"
#include "shapestab/quadrature.hpp"
#include "shapestab/roots.hpp"

namespace shapestab {

std::string to_string(Geometry g) { return g == Geometry::cone ? "cone" : "cylinder"; }

Geometry parse_geometry(const std::string& text) {
  if (text == "cone") return Geometry::cone;
  if (text == "cylinder") return Geometry::cylinder;
  throw std::invalid_argument("unknown geometry '" + text + "' (expected cone or cylinder)");
}

double Profile::value_at(double r) const {
  const std::size_t i = grid.locate(r);
  const double x0 = grid[i], x1 = grid[i + 1];
  const double h = x1 - x0;
  const double t = (r - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u[i] + (t3 - 2 * t2 + t) * h * du[i] + (-2 * t3 + 3 * t2) * u[i + 1] +
         (t3 - t2) * h * du[i + 1];
}

namespace {

// Integrates -u'' - m/r u' = f(u) from the regular launch point.
class RadialShooter {
 public:
  RadialShooter(const Nonlinearity& nl, int dimension, bool singular, const ShootConfig& cfg)
      : nl_(nl), dim_(dimension), m_(singular ? dimension - 1 : 0), cfg_(cfg) {
    opts_.rel_tol = cfg.rel_tol;
    opts_.abs_tol = cfg.abs_tol;
  }

  double launch_point() const { return m_ > 0 ? cfg_.launch_eps : 0.0; }

  // Series data u = u0 - f(u0) r²/(2N), u' = -f(u0) r/N.
  std::array<double, 2> series(double u0, double r) const {
    const double f0 = nl_.f(u0);
    const double n = static_cast<double>(dim_);
    return {u0 - f0 * r * r / (2.0 * n), -f0 * r / n};
  }

  Trajectory run(double u0, double t_end, bool stop_at_zero, const std::string& op,
                 std::vector<double> stops = {}, double tol_factor = 1.0) const {
    const double m = static_cast<double>(m_);
    const Nonlinearity& nl = nl_;
    OdeRhs rhs = [&nl, m](double r, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = -nl.f(y[0]) - (m > 0.0 ? m * y[1] / r : 0.0);
    };
    IvpOptions opts = opts_;
    opts.operation = op;
    opts.stops = std::move(stops);
    opts.rel_tol *= tol_factor;
    opts.abs_tol *= tol_factor;
    if (stop_at_zero) opts.event = [](double, std::span<const double> y) { return y[0]; };
    const double r0 = launch_point();
    const auto y0 = series(u0, r0);
    return integrate_ivp(rhs, r0, y0, t_end, opts);
  }

  // Positive when the trajectory stays positive on [0,1] (value u(1)),
  // negative when it reaches zero first (value r_zero - 1).
  double miss(double u0, const std::string& op) const {
    const Trajectory tr = run(u0, 1.0, true, op);
    if (tr.event_time()) return *tr.event_time() - 1.0;
    return tr.final_state()[0];
  }

 private:
  const Nonlinearity& nl_;
  int dim_;
  int m_;
  ShootConfig cfg_;
  IvpOptions opts_;
};

void check_config(const ShootConfig& cfg, const std::string& op) {
  if (!(cfg.u0_lo > 0.0) || !(cfg.u0_hi > cfg.u0_lo)) throw std::invalid_argument(op + ": need 0 < u0_lo < u0_hi");
  if (cfg.scan_points < 2) throw std::invalid_argument(op + ": scan_points must be >= 2");
  if (cfg.grid_nodes < 5) throw std::invalid_argument(op + ": grid_nodes must be >= 5");
  if (!(cfg.launch_eps > 0.0) || cfg.launch_eps > 1e-2) throw std::invalid_argument(op + ": launch_eps out of range");
}

Profile finish(Geometry geometry, int dimension, const Nonlinearity& nl, const ShootConfig& cfg, double u0,
               std::pair<double, double> bracket, const std::vector<double>& u, const std::vector<double>& du,
               double du1, Grid grid) {
  Profile p;
  p.geometry = geometry;
  p.dimension = dimension;
  p.grid = std::move(grid);
  p.u = u;
  p.du = du;
  p.u_at_0 = u0;
  p.du_at_1 = du1;
  p.nonlinearity = nl;
  p.shooting_bracket = bracket;
  p.d2u_at_1 = boundary_data(p).second;
  (void)cfg;
  return p;
}

Profile solve_by_scan(const Nonlinearity& nl, Geometry geometry, int dimension, const ShootConfig& cfg,
                      const std::string& op) {
  const bool singular = geometry == Geometry::cone;
  const RadialShooter shooter(nl, dimension, singular, cfg);

  const int n = cfg.scan_points;
  const bool logarithmic = cfg.u0_hi / cfg.u0_lo >= 10.0;
  std::vector<double> params(n), misses(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    params[i] = logarithmic ? cfg.u0_lo * std::pow(cfg.u0_hi / cfg.u0_lo, s) : cfg.u0_lo + s * (cfg.u0_hi - cfg.u0_lo);
    try {
      misses[i] = shooter.miss(params[i], op);
    } catch (const SolverError&) {
      misses[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int i = 0; i + 1 < n && !found; ++i) {
    if (misses[i] == 0.0) {
      lo = hi = params[i];
      found = true;
    } else if (std::isfinite(misses[i]) && std::isfinite(misses[i + 1]) && (misses[i] > 0.0) != (misses[i + 1] > 0.0)) {
      lo = params[i];
      hi = params[i + 1];
      found = true;
    }
  }
  if (!found) {
    throw BracketError(op, "no shooting parameter u(0) in [" + format_double(cfg.u0_lo) + ", " +
                               format_double(cfg.u0_hi) + "] has its first zero at r=1");
  }
  double u0 = lo;
  if (hi > lo) {
    u0 = find_root([&](double x) { return shooter.miss(x, op); }, lo, hi, 1e-15 * hi, 300);
  }

  Grid grid = Grid::uniform(cfg.grid_nodes);
  const Trajectory tr =
      shooter.run(u0, 1.0, false, op, std::vector<double>(grid.nodes().begin(), grid.nodes().end()));
  auto u = tr.sample(grid.nodes(), 0);
  auto du = tr.sample(grid.nodes(), 1);
  for (std::size_t i = 0; i < grid.size() && grid[i] < shooter.launch_point(); ++i) {
    const auto s = shooter.series(u0, grid[i]);
    u[i] = s[0];
    du[i] = s[1];
  }
  return finish(geometry, dimension, nl, cfg, u0, {lo, hi}, u, du, tr.final_state()[1], std::move(grid));
}

// Lane-Emden: θ(0) = 1, first zero ρ, then u(r) = ρ^{2/(p-1)} θ(ρ r).
Profile solve_by_scaling(const Nonlinearity& nl, Geometry geometry, int dimension, const ShootConfig& cfg,
                         const std::string& op) {
  const bool singular = geometry == Geometry::cone;
  const RadialShooter shooter(nl, dimension, singular, cfg);
  const Trajectory first = shooter.run(1.0, cfg.scaling_r_max, true, op);
  if (!first.event_time()) {
    throw BracketError(op, "Lane-Emden shooting from u(0)=1 has no zero in (0, " + format_double(cfg.scaling_r_max) +
                               "]; exponent " + format_double(nl.exponent()) + " may be critical or supercritical");
  }
  const double rho = *first.event_time();
  const double p = nl.exponent();
  const double scale = std::pow(rho, 2.0 / (p - 1.0));

  Grid grid = Grid::uniform(cfg.grid_nodes);
  std::vector<double> stretched(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) stretched[i] = std::min(rho * grid[i], rho);
  stretched.back() = rho;
  // Second pass landing on every stretched node, so samples are step ends.
  // u'' carries a factor scale·ρ² over θ'', so θ is resolved that much finer.
  const double tol_factor = std::clamp(1.0 / (scale * rho * rho), 5e-14 / cfg.rel_tol, 1.0);
  const Trajectory tr = shooter.run(1.0, rho, false, op, stretched, tol_factor);
  auto theta = tr.sample(stretched, 0);
  auto dtheta = tr.sample(stretched, 1);
  std::vector<double> u(grid.size()), du(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (stretched[i] < shooter.launch_point()) {
      const auto s = shooter.series(1.0, stretched[i]);
      theta[i] = s[0];
      dtheta[i] = s[1];
    }
    u[i] = scale * theta[i];
    du[i] = scale * rho * dtheta[i];
  }
  const double du1 = scale * rho * tr.final_state()[1];
  return finish(geometry, dimension, nl, cfg, scale, {scale, scale}, u, du, du1, std::move(grid));
}

}  // namespace

Profile solve_radial(const Nonlinearity& nl, int dimension, const ShootConfig& cfg) {
  const std::string op = "solve_radial";
  if (dimension < 2) throw std::invalid_argument(op + ": dimension must be >= 2");
  check_config(cfg, op);
  if (nl.kind() == Nonlinearity::Kind::lane_emden && cfg.use_scaling) {
    return solve_by_scaling(nl, Geometry::cone, dimension, cfg, op);
  }
  return solve_by_scan(nl, Geometry::cone, dimension, cfg, op);
}

Profile solve_1d(const Nonlinearity& nl, const ShootConfig& cfg) {
  const std::string op = "solve_1d";
  check_config(cfg, op);
  if (nl.kind() == Nonlinearity::Kind::lane_emden && cfg.use_scaling) {
    return solve_by_scaling(nl, Geometry::cylinder, 1, cfg, op);
  }
  return solve_by_scan(nl, Geometry::cylinder, 1, cfg, op);
}

double energy(const Profile& p) {
  const std::size_t n = p.grid.size();
  if (p.u.size() != n) throw std::invalid_argument("energy: profile samples do not match grid");
  const int m = p.weight_exponent();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = p.grid[i];
    const double w = m == 0 ? 1.0 : std::pow(r, m);
    const double s = p.u[i];
    integrand[i] = w * (0.5 * p.nonlinearity.f(s) * s - p.nonlinearity.F(s));
  }
  return simpson(p.grid.nodes(), integrand);
}

std::pair<double, double> boundary_data(const Profile& p) {
  const double d2 = -p.nonlinearity.f(0.0) - static_cast<double>(p.weight_exponent()) * p.du_at_1;
  return {p.du_at_1, d2};
}

double ode_residual(const Profile& p) {
  const std::size_t n = p.grid.size();
  const double m = static_cast<double>(p.weight_exponent());
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    std::size_t start = 0;
    double w[5];
    fd_first_derivative_weights(p.grid.nodes(), i, start, w);
    double d2 = 0.0;
    for (std::size_t k = 0; k < 5; ++k) d2 += w[k] * p.du[start + k];
    const double r = p.grid[i];
    const double res = d2 + (m > 0.0 ? m * p.du[i] / r : 0.0) + p.nonlinearity.f(p.u[i]);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

void write_profile_csv(std::ostream& out, const Profile& p) {
  out << "r,u,du\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    out << format_double(p.grid[i]) << ',' << format_double(p.u[i]) << ',' << format_double(p.du[i]) << '\n';
  }
}

}  // namespace shapestab
