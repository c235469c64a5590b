#include "shapestab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "detail/sturm.hpp"
#include "shapestab/errors.hpp"
#include "shapestab/format.hpp"
#include "shapestab/nodes.hpp"

namespace shapestab {

std::string to_string(ProblemTag t) {
  switch (t) {
    case ProblemTag::nuhat: return "nuhat";
    case ProblemTag::alpha: return "alpha";
    case ProblemTag::cap: return "cap";
  }
  return "unknown";
}

std::string to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::nondegenerate: return "nondegenerate";
    case Degeneracy::degenerate: return "degenerate";
    case Degeneracy::unknown: return "unknown";
  }
  return "unknown";
}

double indicial_exponent(int dimension, double nuhat) {
  const double b = static_cast<double>(dimension - 2);
  const double disc = b * b - 4.0 * nuhat;
  if (disc < 0.0) throw std::invalid_argument("indicial_exponent: complex exponent for this eigenvalue");
  return 0.5 * (-b + std::sqrt(disc));
}

namespace {

constexpr double kPi = std::numbers::pi;

void normalize(std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m > 0.0)
    for (double& x : v) x /= m;
}

int zeros_from_angle(double phi) { return static_cast<int>(std::floor(phi / kPi)); }

// Given count(lo) < target <= count(hi) for a nondecreasing count, bisects
// until count(lo) == target - 1 and count(hi) == target.
void isolate(const std::function<int(double)>& count, int target, double& lo, double& hi, const std::string& op) {
  for (int it = 0; it < 200; ++it) {
    if (count(lo) == target - 1 && count(hi) == target) return;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count(mid) >= target) hi = mid;
    else lo = mid;
  }
  throw AmbiguousNodeCount(op, "could not isolate eigenvalue " + std::to_string(target) + " in [" + format_double(lo) +
                                   ", " + format_double(hi) + "]; tighten tolerances");
}

class AlphaProblem {
 public:
  AlphaProblem(std::function<double(double)> q, const SpectrumOptions& o) : q_(std::move(q)), o_(o) {}

  detail::LinearProblem at(double alpha) const {
    detail::LinearProblem lp;
    lp.a = [](double) { return 0.0; };
    lp.b = [this, alpha](double x) { return alpha + q_(x); };
    lp.r0 = 0.0;
    lp.r1 = 1.0;
    lp.w0 = 1.0;
    lp.dw0 = 0.0;
    return lp;
  }
  double angle(double alpha) const { return detail::prufer_angle(at(alpha), o_.rel_tol, o_.abs_tol, "alpha_spectrum"); }

 private:
  std::function<double(double)> q_;
  SpectrumOptions o_;
};

}  // namespace

std::vector<EigenResult> alpha_spectrum(const std::function<double(double)>& potential, int k, const Grid& grid,
                                        const SpectrumOptions& opts) {
  const std::string op = "alpha_spectrum";
  if (k < 1) throw std::invalid_argument(op + ": k must be >= 1");
  double qmin = potential(grid[0]), qmax = qmin;
  for (double x : grid.nodes()) {
    const double q = potential(x);
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
  }
  const AlphaProblem prob(potential, opts);
  auto count = [&](double a) { return zeros_from_angle(prob.angle(a)); };

  std::vector<EigenResult> out;
  double floor_lo = -qmax - 1.0;  // z convex while z > 0: no zeros
  for (int i = 1; i <= k; ++i) {
    const double w = (2.0 * i - 1.0) * kPi / 2.0;
    double hi = w * w - qmin + 1.0;
    while (count(hi) < i) {
      hi = 2.0 * std::abs(hi) + 1.0;
      if (hi > opts.bracket_cap)
        throw BracketError(op, "eigenvalue " + std::to_string(i) + " not bracketed below cap " +
                                   format_double(opts.bracket_cap));
    }
    double lo = floor_lo;
    isolate(count, i, lo, hi, op);
    const double level = i * kPi;
    const double alpha = detail::solve_angle_level([&](double a) { return prob.angle(a); }, level, lo, hi,
                                                   opts.eigen_tol * std::max(1.0, std::abs(hi)));
    const Trajectory tr = detail::shoot_linear(prob.at(alpha), opts.rel_tol, opts.abs_tol, op);
    EigenResult r;
    r.value = alpha;
    r.grid = grid;
    r.eigenfunction = tr.sample(grid.nodes(), 0);
    r.eigenfunction.back() = 0.0;
    normalize(r.eigenfunction);
    r.index = count_nodes(r.eigenfunction);
    r.tag = ProblemTag::alpha;
    out.push_back(std::move(r));
    floor_lo = alpha;
  }
  return out;
}

std::vector<EigenResult> alpha_spectrum(const Profile& p, int k, const SpectrumOptions& opts) {
  if (p.geometry != Geometry::cylinder) throw std::invalid_argument("alpha_spectrum: needs a cylinder profile");
  const Nonlinearity& nl = p.nonlinearity;
  return alpha_spectrum([&p, &nl](double x) { return nl.df(p.value_at(x)); }, k, p.grid, opts);
}

namespace {

// z = r^γ w removes the singular term: w'' + (2γ+N-1)/r w' + f'(u) w = 0.
class NuhatProblem {
 public:
  NuhatProblem(const Profile& p, const SpectrumOptions& o) : p_(p), o_(o) {}

  detail::LinearProblem at(double nuhat) const {
    const int n = p_.dimension;
    const double gamma = indicial_exponent(n, nuhat);
    const double c = 2.0 * gamma + n - 1.0;
    const double eps = o_.launch_eps;
    const double q0 = p_.nonlinearity.df(p_.u_at_0);
    detail::LinearProblem lp;
    lp.a = [c](double r) { return c / r; };
    lp.b = [this](double r) { return p_.nonlinearity.df(p_.value_at(r)); };
    lp.r0 = eps;
    lp.r1 = 1.0;
    lp.w0 = 1.0 - q0 * eps * eps / (2.0 * (c + 1.0));
    lp.dw0 = -q0 * eps / (c + 1.0);
    return lp;
  }
  double angle(double nuhat) const { return detail::prufer_angle(at(nuhat), o_.rel_tol, o_.abs_tol, "nuhat_first"); }
  int count(double nuhat) const { return zeros_from_angle(angle(nuhat)); }

  EigenResult result(double nuhat) const {
    const Trajectory tr = detail::shoot_linear(at(nuhat), o_.rel_tol, o_.abs_tol, "nuhat_first");
    const double gamma = indicial_exponent(p_.dimension, nuhat);
    EigenResult r;
    r.value = nuhat;
    r.grid = p_.grid;
    r.eigenfunction.resize(p_.grid.size());
    std::vector<double> ts;
    for (double x : p_.grid.nodes()) ts.push_back(std::max(x, o_.launch_eps));
    const auto w = tr.sample(ts, 0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double x = p_.grid[i];
      r.eigenfunction[i] = (x == 0.0 ? (gamma > 0.0 ? 0.0 : 1.0) : std::pow(x, gamma)) * w[i];
    }
    r.eigenfunction.back() = 0.0;
    normalize(r.eigenfunction);
    r.index = count_nodes(r.eigenfunction);
    r.tag = ProblemTag::nuhat;
    return r;
  }

 private:
  const Profile& p_;
  SpectrumOptions o_;
};

void require_cone(const Profile& p, const std::string& op) {
  if (p.geometry != Geometry::cone) throw std::invalid_argument(op + ": needs a cone profile");
  if (p.dimension < 3) throw std::invalid_argument(op + ": needs N >= 3");
}

std::vector<EigenResult> nuhat_below(const Profile& p, double floor, double top, int max_count,
                                     const SpectrumOptions& opts, const std::string& op) {
  const NuhatProblem prob(p, opts);
  if (prob.count(floor) > 0) {
    throw AmbiguousNodeCount(op, "an eigenvalue lies below the search floor " + format_double(floor) +
                                     "; tighten tolerances or lower the floor");
  }
  const int total = std::min(prob.count(top), max_count);
  std::vector<EigenResult> out;
  double lo = floor;
  for (int i = 1; i <= total; ++i) {
    double a = lo, b = top;
    isolate([&](double v) { return prob.count(v); }, i, a, b, op);
    const double v = detail::solve_angle_level([&](double x) { return prob.angle(x); }, i * kPi, a, b,
                                               opts.eigen_tol);
    out.push_back(prob.result(v));
    lo = v;
  }
  return out;
}

}  // namespace

NuhatResult nuhat_first(const Profile& p, std::optional<double> search_floor, const SpectrumOptions& opts) {
  const std::string op = "nuhat_first";
  require_cone(p, op);
  const double floor = search_floor.value_or(-(p.dimension - 1.0) + 1e-9);
  if (!(floor < 0.0)) throw std::invalid_argument(op + ": search floor must be negative");
  auto eigs = nuhat_below(p, floor, 0.0, 1, opts, op);
  NuhatResult r;
  if (!eigs.empty()) r.eigen = std::move(eigs.front());
  return r;
}

std::vector<EigenResult> nuhat_nonpositive(const Profile& p, const SpectrumOptions& opts) {
  const std::string op = "nuhat_nonpositive";
  require_cone(p, op);
  return nuhat_below(p, -(p.dimension - 1.0) + 1e-9, 0.0, 1000, opts, op);
}

Degeneracy nondegeneracy_check(Geometry geometry, const Profile& p, double lambda1, const SpectrumOptions& opts) {
  constexpr double tol = 1e-8;
  if (p.geometry != geometry) throw std::invalid_argument("nondegeneracy_check: geometry does not match profile");
  std::vector<double> nonpositive;
  bool zero_eigenvalue = false;
  try {
    if (geometry == Geometry::cone) {
      require_cone(p, "nondegeneracy_check");
      for (const auto& e : nuhat_nonpositive(p, opts)) nonpositive.push_back(e.value);
      // A singular eigenvalue sitting at 0 shows up as w(1; 0) = 0.
      const NuhatProblem prob(p, opts);
      const double phi = prob.angle(0.0);
      const double k = std::round(phi / kPi);
      if (k >= 1.0 && std::abs(phi - k * kPi) < tol) zero_eigenvalue = true;
    } else {
      for (int k = 1;; k *= 2) {
        const auto eigs = alpha_spectrum(p, k, opts);
        if (eigs.back().value > tol || k >= 64) {
          for (const auto& e : eigs)
            if (e.value <= tol) nonpositive.push_back(e.value);
          break;
        }
      }
    }
  } catch (const SolverError&) {
    return Degeneracy::unknown;
  }
  for (double v : nonpositive) {
    if (std::abs(v) <= tol) zero_eigenvalue = true;
  }
  if (zero_eigenvalue) return Degeneracy::degenerate;
  for (double v : nonpositive) {
    if (std::abs(v + lambda1) <= tol * std::max(1.0, std::abs(lambda1))) return Degeneracy::degenerate;
  }
  if (!(lambda1 > 0.0)) return Degeneracy::unknown;
  if (nonpositive.empty() || lambda1 > -nonpositive.front()) return Degeneracy::nondegenerate;
  return Degeneracy::unknown;
}

void write_spectrum_csv(std::ostream& out, const std::vector<EigenResult>& eigs, bool with_eigenfunctions) {
  out << (with_eigenfunctions ? "index,value,r,z\n" : "index,value\n");
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const auto& e = eigs[i];
    const std::string head = std::to_string(i + 1) + ',' + format_double(e.value);
    if (!with_eigenfunctions) {
      out << head << '\n';
      continue;
    }
    for (std::size_t j = 0; j < e.grid.size(); ++j)
      out << head << ',' << format_double(e.grid[j]) << ',' << format_double(e.eigenfunction[j]) << '\n';
  }
}

}  // namespace shapestab
