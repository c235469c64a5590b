#include "shapestab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "shapestab/errors.hpp"
#include "shapestab/format.hpp"
#include "shapestab/ode.hpp"
#include "shapestab/quadrature.hpp"
#include "shapestab/roots.hpp"

namespace shapestab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::marginal: return "marginal";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Verdict parse_verdict(const std::string& text) {
  if (text == "stable") return Verdict::stable;
  if (text == "unstable") return Verdict::unstable;
  if (text == "marginal") return Verdict::marginal;
  if (text == "indeterminate") return Verdict::indeterminate;
  throw std::invalid_argument("unknown verdict '" + text + "'");
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_resonance(double end, const std::vector<double>& w, double threshold, const std::string& op,
                     double lambda) {
  if (!(std::abs(end) > threshold * max_abs(w))) {
    throw ResonanceError(op, "homogeneous problem is resonant at lambda=" + format_double(lambda) +
                                 " (boundary value " + format_double(end) + ")");
  }
}

}  // namespace

namespace {

// Joint solve of the background ODE and the factored linear equation,
//   u'' = -f(u) - m u'/r,   w'' = -a(r) w' - (f'(u) - shift) w,
//   J' = r^k w u',
// so f'(u) and u' along the way carry no interpolation error.
struct JointSolve {
  std::vector<double> w;  // on the profile grid
  double w1 = 0.0, dw1 = 0.0, moment = 0.0;
};

JointSolve joint_solve(const Profile& p, double a_coef, double shift, double k_power, double r0, double w0,
                       double dw0, double moment0, const LinearSolveOptions& opts, const std::string& op) {
  const Nonlinearity& nl = p.nonlinearity;
  const double m = static_cast<double>(p.weight_exponent());
  OdeRhs rhs = [&nl, m, a_coef, shift, k_power](double r, std::span<const double> y, std::span<double> dy) {
    const double inv_r = r > 0.0 ? 1.0 / r : 0.0;
    dy[0] = y[1];
    dy[1] = -nl.f(y[0]) - m * y[1] * inv_r;
    dy[2] = y[3];
    dy[3] = -a_coef * inv_r * y[3] - (nl.df(y[0]) - shift) * y[2];
    dy[4] = (k_power == 0.0 ? 1.0 : std::pow(r, k_power)) * y[2] * y[1];
  };
  const double n = static_cast<double>(p.dimension);
  const double f0 = nl.f(p.u_at_0);
  const double y0[5] = {p.u_at_0 - f0 * r0 * r0 / (2.0 * n), -f0 * r0 / n, w0, dw0, moment0};
  IvpOptions o;
  o.rel_tol = opts.rel_tol;
  o.abs_tol = opts.abs_tol;
  o.operation = op;
  for (double x : p.grid.nodes())
    if (x > r0) o.stops.push_back(x);
  const Trajectory tr = integrate_ivp(rhs, r0, y0, 1.0, o);

  JointSolve out;
  std::vector<double> ts(p.grid.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = std::max(p.grid[i], r0);
  out.w = tr.sample(ts, 2);
  out.w1 = tr.final_state()[2];
  out.dw1 = tr.final_state()[3];
  out.moment = tr.final_state()[4];
  return out;
}

}  // namespace

HProfile solve_h_cone(const Profile& p, double lambda, const LinearSolveOptions& opts) {
  const std::string op = "solve_h_cone";
  if (p.geometry != Geometry::cone) throw std::invalid_argument(op + ": needs a cone profile");
  if (p.dimension < 3) throw std::invalid_argument(op + ": needs N >= 3");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument(op + ": lambda must be positive");

  // h = r^γ w with γ² + (N-2)γ = λ: w'' + (2γ+N-1)/r w' + f'(u) w = 0.
  const int n = p.dimension;
  const double gamma = indicial_exponent(n, -lambda);
  const double c = 2.0 * gamma + n - 1.0;
  const double eps = opts.launch_eps;
  const double q0 = p.nonlinearity.df(p.u_at_0);
  const double f0 = p.nonlinearity.f(p.u_at_0);
  // ∫₀^ε r^{N-3+γ} w u' with w ≈ 1, u' ≈ -f(u₀) r / N.
  const double head = -f0 / n * std::pow(eps, n - 1.0 + gamma) / (n - 1.0 + gamma);
  JointSolve js = joint_solve(p, c, 0.0, n - 3.0 + gamma, eps, 1.0 - q0 * eps * eps / (2.0 * (c + 1.0)),
                              -q0 * eps / (c + 1.0), head, opts, op);
  for (std::size_t i = 0; i < js.w.size() && p.grid[i] < eps; ++i) {
    const double r = p.grid[i];
    js.w[i] = 1.0 - q0 * r * r / (2.0 * (c + 1.0));
  }
  check_resonance(js.w1, js.w, opts.resonance_threshold, op, lambda);
  const double scale = -p.du_at_1 / js.w1;

  HProfile hp;
  hp.geometry = Geometry::cone;
  hp.lambda = lambda;
  hp.grid = p.grid;
  hp.exponent = gamma;
  hp.h.resize(js.w.size());
  for (std::size_t i = 0; i < js.w.size(); ++i) {
    const double r = p.grid[i];
    hp.h[i] = r == 0.0 ? 0.0 : scale * std::pow(r, gamma) * js.w[i];
  }
  hp.h.back() = -p.du_at_1;
  hp.dh_at_1 = scale * (gamma * js.w1 + js.dw1);
  hp.h_at_0 = 0.0;
  hp.moment = scale * js.moment;
  return hp;
}

HProfile solve_h_cylinder(const Profile& p, double lambda, const LinearSolveOptions& opts) {
  const std::string op = "solve_h_cylinder";
  if (p.geometry != Geometry::cylinder) throw std::invalid_argument(op + ": needs a cylinder profile");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument(op + ": lambda must be >= 0");

  const JointSolve js = joint_solve(p, 0.0, lambda, 0.0, 0.0, 1.0, 0.0, 0.0, opts, op);
  check_resonance(js.w1, js.w, opts.resonance_threshold, op, lambda);
  const double scale = -p.du_at_1 / js.w1;

  HProfile hp;
  hp.geometry = Geometry::cylinder;
  hp.lambda = lambda;
  hp.grid = p.grid;
  hp.h.resize(js.w.size());
  for (std::size_t i = 0; i < js.w.size(); ++i) hp.h[i] = scale * js.w[i];
  hp.h.back() = -p.du_at_1;
  hp.dh_at_1 = scale * js.dw1;
  hp.h_at_0 = scale;
  hp.moment = scale * js.moment;
  return hp;
}

HProfile solve_h(const Profile& p, double lambda, const LinearSolveOptions& opts) {
  return p.geometry == Geometry::cone ? solve_h_cone(p, lambda, opts) : solve_h_cylinder(p, lambda, opts);
}

double mode_second_variation(Geometry geometry, const Profile& p, const HProfile& h) {
  if (p.geometry != geometry || h.geometry != geometry)
    throw std::invalid_argument("mode_second_variation: geometry mismatch");
  const double du1 = p.du_at_1;
  if (geometry == Geometry::cone) return -du1 * (h.dh_at_1 + p.d2u_at_1);
  return -du1 * h.dh_at_1 + du1 * p.nonlinearity.f(0.0);
}

namespace {

void require_pair(const Profile& p, const HProfile& h, Geometry g, const std::string& op) {
  if (p.geometry != g || h.geometry != g) throw std::invalid_argument(op + ": geometry mismatch");
  if (!(h.grid == p.grid) || h.h.size() != p.du.size()) throw std::invalid_argument(op + ": grids differ");
}

double integral_h_du(const Profile& p, const HProfile& h) {
  if (h.moment) return *h.moment;
  std::vector<double> y(p.grid.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = h.h[i] * p.du[i];
  return simpson(p.grid.nodes(), y);
}

// ∫₀¹ r^{N-3} h u' dr. Near the origin the integrand behaves like
// r^{N-2+γ}, integrated exactly over the first two cells.
double weighted_integral_cone(const Profile& p, const HProfile& h) {
  if (h.moment) return *h.moment;
  const int n = p.dimension;
  const std::size_t m = p.grid.size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = p.grid[i];
    y[i] = r == 0.0 ? 0.0 : std::pow(r, n - 3) * h.h[i] * p.du[i];
  }
  if (m < 5) return simpson(p.grid.nodes(), y);
  const double r2 = p.grid[2];
  const double head = y[2] * r2 / (n - 1.0 + h.exponent);
  return head + simpson(p.grid.nodes(), y, 2);
}

}  // namespace

double rho_index(const Profile& p, const HProfile& h) {
  require_pair(p, h, Geometry::cylinder, "rho_index");
  return -p.nonlinearity.f(p.u_at_0) * h.h_at_0 - h.lambda * integral_h_du(p, h);
}

double cone_identity_residual(const Profile& p, const HProfile& h) {
  require_pair(p, h, Geometry::cone, "cone_identity_residual");
  if (p.dimension < 3) throw std::invalid_argument("cone_identity_residual: needs N >= 3");
  const double lhs = mode_second_variation(Geometry::cone, p, h);
  const double rhs = (p.dimension - 1.0 - h.lambda) * weighted_integral_cone(p, h);
  return std::abs(lhs - rhs);
}

double cylinder_identity_residual(const Profile& p, const HProfile& h) {
  require_pair(p, h, Geometry::cylinder, "cylinder_identity_residual");
  const double du1 = p.du_at_1;
  const double lhs = -h.dh_at_1 * du1;
  const double rhs = -p.nonlinearity.f(0.0) * du1 - p.nonlinearity.f(p.u_at_0) * h.h_at_0 -
                     h.lambda * integral_h_du(p, h);
  return std::abs(lhs - rhs);
}

double lagrange_multiplier(const Profile& p) { return -0.5 * p.du_at_1 * p.du_at_1; }

double torsion_beta() {
  return find_root([](double t) { return std::sqrt(t) * std::tanh(std::sqrt(t)) - 1.0; }, 1.0, 2.0, 1e-15, 200);
}

StabilityReport classify_cone(const Profile& p, double lambda1) {
  const std::string op = "classify_cone";
  if (p.geometry != Geometry::cone || p.dimension < 3) throw std::invalid_argument(op + ": needs a cone profile, N >= 3");
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument(op + ": lambda1 must be positive");
  const int n = p.dimension;

  StabilityReport r;
  r.geometry = Geometry::cone;
  r.dimension = n;
  r.lambda1 = lambda1;
  r.mu = lagrange_multiplier(p);

  const NuhatResult nu = nuhat_first(p);
  if (!nu.nonnegative()) r.first_eigenvalue = nu.eigen->value;
  const bool below = r.first_eigenvalue && lambda1 <= -*r.first_eigenvalue;
  const Degeneracy deg = nondegeneracy_check(Geometry::cone, p, lambda1);

  try {
    const HProfile h = solve_h_cone(p, lambda1);
    r.d1 = mode_second_variation(Geometry::cone, p, h);
    r.identity_residual = cone_identity_residual(p, h);
  } catch (const ResonanceError&) {
    if (!below && deg != Degeneracy::degenerate) throw;
  }

  if (deg == Degeneracy::degenerate) {
    r.verdict = Verdict::indeterminate;
    r.theorem_basis = "cone-degenerate-solution";
  } else if (below) {
    r.verdict = Verdict::indeterminate;
    r.theorem_basis = "cone-below-singular-eigenvalue";
  } else if (std::abs(lambda1 - (n - 1.0)) < kMarginalBand) {
    r.verdict = Verdict::marginal;
    r.theorem_basis = "cone-threshold-marginal";
  } else {
    r.verdict = lambda1 < n - 1.0 ? Verdict::unstable : Verdict::stable;
    r.theorem_basis = "cone-threshold";
  }
  return r;
}

StabilityReport classify_cone(const Nonlinearity& nl, int dimension, double lambda1, const ShootConfig& cfg) {
  if (dimension < 3) throw std::invalid_argument("classify_cone: needs N >= 3");
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument("classify_cone: lambda1 must be positive");
  return classify_cone(solve_radial(nl, dimension, cfg), lambda1);
}

bool cylinder_sufficient_condition(const Profile& p, double alpha1, double lambda1) {
  const Nonlinearity& nl = p.nonlinearity;
  if (nl.f(0.0) != 0.0) return false;
  double sup = 0.0;
  if (nl.is_nonnegative_increasing()) {
    sup = std::abs(nl.df(p.u_at_0));
  } else {
    for (double s : p.u) sup = std::max(sup, std::abs(nl.df(s)));
  }
  return lambda1 > std::max(-alpha1, sup);
}

namespace {

Verdict verdict_from_rho(double rho) {
  if (std::abs(rho) < kMarginalBand) return Verdict::marginal;
  return rho < 0.0 ? Verdict::unstable : Verdict::stable;
}

}  // namespace

StabilityReport classify_cylinder(const Profile& p, double lambda1) {
  const std::string op = "classify_cylinder";
  if (p.geometry != Geometry::cylinder) throw std::invalid_argument(op + ": needs a cylinder profile");
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument(op + ": lambda1 must be positive");

  StabilityReport r;
  r.geometry = Geometry::cylinder;
  r.lambda1 = lambda1;
  r.mu = lagrange_multiplier(p);
  const double alpha1 = alpha_spectrum(p, 1).front().value;
  r.first_eigenvalue = alpha1;
  const bool below = lambda1 <= -alpha1;

  try {
    const HProfile h = solve_h_cylinder(p, lambda1);
    r.rho = rho_index(p, h);
    r.d1 = mode_second_variation(Geometry::cylinder, p, h);
    r.identity_residual = cylinder_identity_residual(p, h);
  } catch (const ResonanceError&) {
    if (!below) throw;
  }

  if (below) {
    r.verdict = Verdict::indeterminate;
    r.theorem_basis = "cylinder-below-first-eigenvalue";
  } else {
    r.verdict = verdict_from_rho(*r.rho);
    r.theorem_basis = "cylinder-rho-criterion";
    if (cylinder_sufficient_condition(p, alpha1, lambda1)) r.theorem_basis += "; sufficient-condition-holds";
  }
  if (p.nonlinearity.kind() == Nonlinearity::Kind::torsion) {
    const double beta = torsion_beta();
    r.theorem_basis += lambda1 < beta ? "; torsion-beta-threshold: below" : (lambda1 > beta ? "; torsion-beta-threshold: above"
                                                                                           : "; torsion-beta-threshold: at");
  }
  return r;
}

StabilityReport classify_cylinder(const Nonlinearity& nl, double lambda1, const ShootConfig& cfg) {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1))
    throw std::invalid_argument("classify_cylinder: lambda1 must be positive");
  return classify_cylinder(solve_1d(nl, cfg), lambda1);
}

namespace {

double rho_at(const Profile& p, double lambda) { return rho_index(p, solve_h_cylinder(p, lambda)); }

}  // namespace

SweepResult sweep_rho(const Profile& p, double lambda_lo, double lambda_hi, int steps) {
  const std::string op = "sweep_rho";
  if (p.geometry != Geometry::cylinder) throw std::invalid_argument(op + ": needs a cylinder profile");
  if (steps < 1) throw std::invalid_argument(op + ": steps must be >= 1");
  if (!std::isfinite(lambda_lo) || !std::isfinite(lambda_hi) || lambda_hi < lambda_lo)
    throw std::invalid_argument(op + ": need lo <= hi");
  if (steps > 1 && !(lambda_hi > lambda_lo)) throw std::invalid_argument(op + ": need lo < hi for several steps");
  const double alpha1 = alpha_spectrum(p, 1).front().value;
  if (!(lambda_lo > 0.0) || !(lambda_lo > -alpha1)) {
    throw std::invalid_argument(op + ": lambda_lo must exceed max(0, -alpha1) = " +
                                format_double(std::max(0.0, -alpha1)));
  }

  SweepResult out;
  out.rows.resize(steps);
  for (int i = 0; i < steps; ++i) {
    out.rows[i].lambda1 = steps == 1 ? lambda_lo : lambda_lo + (lambda_hi - lambda_lo) * i / (steps - 1.0);
  }
  out.rows.back().lambda1 = steps == 1 ? lambda_lo : lambda_hi;

  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), steps));
  std::atomic<int> next{0};
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&] {
      for (int i = next++; i < steps; i = next++) {
        out.rows[i].rho = rho_at(p, out.rows[i].lambda1);
        out.rows[i].verdict = verdict_from_rho(out.rows[i].rho);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  for (int i = 0; i + 1 < steps; ++i) {
    const double a = out.rows[i].rho, b = out.rows[i + 1].rho;
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      ++out.sign_changes;
      if (!out.bracket) out.bracket = std::make_pair(out.rows[i].lambda1, out.rows[i + 1].lambda1);
    }
  }
  if (out.bracket) {
    out.crossing = find_root([&](double l) { return rho_at(p, l); }, out.bracket->first, out.bracket->second,
                             1e-12 * std::max(1.0, out.bracket->second), 200);
  }
  return out;
}

SweepResult sweep_rho(const Nonlinearity& nl, double lambda_lo, double lambda_hi, int steps, const ShootConfig& cfg) {
  if (steps < 1) throw std::invalid_argument("sweep_rho: steps must be >= 1");
  return sweep_rho(solve_1d(nl, cfg), lambda_lo, lambda_hi, steps);
}

MonotonicityResult hprime_monotonicity_check(const Profile& p, std::span<const double> lambdas,
                                             const LinearSolveOptions& opts) {
  if (lambdas.empty()) throw std::invalid_argument("hprime_monotonicity_check: empty lambda list");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    if (!(lambdas[i] <= lambdas[i + 1])) throw std::invalid_argument("hprime_monotonicity_check: lambdas must ascend");
  }
  MonotonicityResult out;
  for (double l : lambdas) out.dh_at_1.push_back(solve_h(p, l, opts).dh_at_1);
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    const double diff = out.dh_at_1[i + 1] - out.dh_at_1[i];
    const bool bad = lambdas[i + 1] == lambdas[i] ? std::abs(diff) > 1e-12 : diff < -1e-9;
    if (bad) {
      out.monotone = false;
      out.witness = std::make_pair(lambdas[i], lambdas[i + 1]);
      break;
    }
  }
  return out;
}

}  // namespace shapestab
