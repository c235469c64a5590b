#include "shapestab/neumann.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/sturm.hpp"
#include "shapestab/errors.hpp"
#include "shapestab/format.hpp"
#include "shapestab/nodes.hpp"
#include "shapestab/roots.hpp"

namespace shapestab {

namespace {

constexpr double kPi = std::numbers::pi;

double positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("neumann domain: " + what + " must be positive");
  return v;
}

int dimension_at_least_2(int n) {
  if (n < 2) throw std::invalid_argument("neumann domain: ambient dimension must be >= 2");
  return n;
}

std::vector<double> split_numbers(std::string_view text, const std::string& desc) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (piece.empty() || used != piece.size()) throw std::invalid_argument("bad number '" + piece + "' in " + desc);
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int as_dimension(double v, const std::string& desc) {
  if (v != std::floor(v) || v < 2 || v > 1000) throw std::invalid_argument("bad dimension in " + desc);
  return static_cast<int>(v);
}

double bessel_j(int n, double x) {
  // Σ (-1)^k (x/2)^{2k+n} / (k! (k+n)!)
  double term = std::pow(0.5 * x, n);
  for (int i = 1; i <= n; ++i) term /= i;
  double sum = term;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

NeumannDomain NeumannDomain::interval(double length) {
  NeumannDomain d;
  d.kind = Kind::interval;
  d.a = positive(length, "length");
  return d;
}

NeumannDomain NeumannDomain::rectangle(double a, double b) {
  NeumannDomain d;
  d.kind = Kind::rectangle;
  d.a = positive(a, "side");
  d.b = positive(b, "side");
  return d;
}

NeumannDomain NeumannDomain::disk(double radius) {
  NeumannDomain d;
  d.kind = Kind::disk;
  d.a = positive(radius, "radius");
  return d;
}

NeumannDomain NeumannDomain::cap(double theta0, int dimension) {
  if (!(theta0 > 0.0 && theta0 < kPi)) throw std::invalid_argument("neumann domain: cap angle must be in (0, pi)");
  NeumannDomain d;
  d.kind = Kind::cap;
  d.a = theta0;
  d.dimension = dimension_at_least_2(dimension);
  return d;
}

NeumannDomain NeumannDomain::sphere(int dimension) {
  NeumannDomain d;
  d.kind = Kind::sphere;
  d.dimension = dimension_at_least_2(dimension);
  return d;
}

NeumannDomain NeumannDomain::explicit_lambda1(double value) {
  NeumannDomain d;
  d.kind = Kind::explicit_value;
  d.a = positive(value, "explicit eigenvalue");
  return d;
}

NeumannDomain NeumannDomain::parse(std::string_view text) {
  const std::string desc(text);
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("domain '" + desc + "' needs name:params");
  const std::string_view name = text.substr(0, colon);
  const auto v = split_numbers(text.substr(colon + 1), "domain '" + desc + "'");
  auto need = [&](std::size_t n) {
    if (v.size() != n)
      throw std::invalid_argument("domain '" + desc + "' expects " + std::to_string(n) + " parameter(s)");
  };
  if (name == "interval") return need(1), interval(v[0]);
  if (name == "rectangle") return need(2), rectangle(v[0], v[1]);
  if (name == "disk") return need(1), disk(v[0]);
  if (name == "cap") return need(2), cap(v[0], as_dimension(v[1], desc));
  if (name == "sphere") return need(1), sphere(as_dimension(v[0], desc));
  if (name == "explicit") return need(1), explicit_lambda1(v[0]);
  throw std::invalid_argument("unknown domain kind '" + std::string(name) + "'");
}

std::string NeumannDomain::descriptor() const {
  switch (kind) {
    case Kind::interval: return "interval:" + format_double(a);
    case Kind::rectangle: return "rectangle:" + format_double(a) + "," + format_double(b);
    case Kind::disk: return "disk:" + format_double(a);
    case Kind::cap: return "cap:" + format_double(a) + "," + std::to_string(dimension);
    case Kind::sphere: return "sphere:" + std::to_string(dimension);
    case Kind::explicit_value: return "explicit:" + format_double(a);
  }
  return "";
}

double bessel_j1_prime_first_zero() {
  auto djn = [](double x) { return 0.5 * (bessel_j(0, x) - bessel_j(2, x)); };
  return find_root(djn, 1.5, 2.5, 1e-15, 200);
}

namespace {

// First azimuthal family g = sin θ · w:
//   w'' + N cot θ w' + (λ - (N-1)) w = 0, Neumann cos θ₀ w + sin θ₀ w' = 0,
// which in the Prüfer angle of w reads φ(θ₀) + θ₀ = π.
detail::LinearProblem azimuthal(double lambda, int n, double theta0, double eps) {
  const double c = lambda - (n - 1.0);
  detail::LinearProblem lp;
  lp.a = [n](double t) { return n / std::tan(t); };
  lp.b = [c](double) { return c; };
  lp.r0 = eps;
  lp.r1 = theta0;
  lp.w0 = 1.0 - c * eps * eps / (2.0 * (n + 1.0));
  lp.dw0 = -c * eps / (n + 1.0);
  return lp;
}

// Zonal family g'' + (N-2) cot θ g' + λ g = 0, g'(θ₀) = 0: φ(θ₀) = 3π/2 for
// the first nonconstant mode.
detail::LinearProblem zonal(double lambda, int n, double theta0, double eps) {
  detail::LinearProblem lp;
  lp.a = [n](double t) { return (n - 2.0) / std::tan(t); };
  lp.b = [lambda](double) { return lambda; };
  lp.r0 = eps;
  lp.r1 = theta0;
  lp.w0 = 1.0 - lambda * eps * eps / (2.0 * (n - 1.0));
  lp.dw0 = -lambda * eps / (n - 1.0);
  return lp;
}

double cap_root(const std::function<double(double)>& angle, double level, double cap, const std::string& op) {
  double lo = 0.0;
  if (!(angle(lo) < level)) throw SolverError(op, "cap eigenvalue bracket: no sign change above 0");
  double hi = 1.0;
  while (angle(hi) < level) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) throw BracketError(op, "cap eigenvalue exceeds " + format_double(cap));
  }
  return find_root([&](double l) { return angle(l) - level; }, lo, hi, 1e-14 * hi, 300);
}

}  // namespace

EigenResult cap_first_mode(double theta0, int dimension, const SpectrumOptions& opts) {
  const std::string op = "neumann_lambda1";
  const NeumannDomain dom = NeumannDomain::cap(theta0, dimension);
  (void)dom;
  constexpr double margin = 1e-3;
  if (theta0 < margin || theta0 > kPi - margin) {
    throw SolverError(op, "cap angle " + format_double(theta0) + " too close to 0 or pi for the cap solver");
  }
  const int n = dimension;
  const double eps = opts.launch_eps;
  auto az_angle = [&](double l) {
    return detail::prufer_angle(azimuthal(l, n, theta0, eps), opts.rel_tol, opts.abs_tol, op) + theta0;
  };
  auto zo_angle = [&](double l) {
    return detail::prufer_angle(zonal(l, n, theta0, eps), opts.rel_tol, opts.abs_tol, op);
  };
  const double cap = std::max(opts.bracket_cap, 1e3 / (theta0 * theta0));
  const double l_az = cap_root(az_angle, kPi, cap, op);
  const double l_zo = cap_root(zo_angle, 1.5 * kPi, cap, op);

  const bool use_az = l_az <= l_zo;
  const double lambda = use_az ? l_az : l_zo;
  const auto lp = use_az ? azimuthal(lambda, n, theta0, eps) : zonal(lambda, n, theta0, eps);
  const Trajectory tr = detail::shoot_linear(lp, opts.rel_tol, opts.abs_tol, op);

  EigenResult r;
  r.value = lambda;
  r.grid = Grid::uniform(513);
  r.tag = ProblemTag::cap;
  r.eigenfunction.resize(r.grid.size());
  double m = 0.0;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double t = std::max(theta0 * r.grid[i], eps);
    const double w = tr.component_at(std::min(t, theta0), 0);
    r.eigenfunction[i] = use_az ? (r.grid[i] == 0.0 ? 0.0 : std::sin(t) * w) : w;
    m = std::max(m, std::abs(r.eigenfunction[i]));
  }
  for (double& x : r.eigenfunction) x /= m;
  r.index = count_nodes(r.eigenfunction);
  return r;
}

double neumann_lambda1(const NeumannDomain& d) {
  switch (d.kind) {
    case NeumannDomain::Kind::interval: return (kPi / d.a) * (kPi / d.a);
    case NeumannDomain::Kind::rectangle: {
      const double l = std::max(d.a, d.b);
      return (kPi / l) * (kPi / l);
    }
    case NeumannDomain::Kind::disk: {
      const double j = bessel_j1_prime_first_zero() / d.a;
      return j * j;
    }
    case NeumannDomain::Kind::cap: return cap_first_mode(d.a, d.dimension).value;
    case NeumannDomain::Kind::sphere: return d.dimension - 1.0;
    case NeumannDomain::Kind::explicit_value: return d.a;
  }
  throw std::invalid_argument("neumann_lambda1: unknown domain");
}

}  // namespace shapestab
