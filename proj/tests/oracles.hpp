#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library: fixed-step RK4, plain bisection, Sturm counts on
// tridiagonal matrices and the Thomas algorithm.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

// Classic RK4 on a 2-vector.
using Rhs2 = std::function<std::array<double, 2>(double, const std::array<double, 2>&)>;

inline std::array<double, 2> rk4(const Rhs2& f, double t0, std::array<double, 2> y, double t1, int steps,
                                 std::vector<std::array<double, 2>>* path = nullptr) {
  const double h = (t1 - t0) / steps;
  if (path) path->push_back(y);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    auto add = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double s) {
      return std::array<double, 2>{a[0] + s * b[0], a[1] + s * b[1]};
    };
    const auto k1 = f(t, y);
    const auto k2 = f(t + h / 2, add(y, k1, h / 2));
    const auto k3 = f(t + h / 2, add(y, k2, h / 2));
    const auto k4 = f(t + h, add(y, k3, h));
    for (int c = 0; c < 2; ++c) y[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    if (path) path->push_back(y);
  }
  return y;
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi, double tol) {
  double glo = g(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Radial solution of -u'' - m/r u' = f(u), u'(0) = 0, u(1) = 0, by RK4
// from a series launch at r0 and bisection on u(0) over [lo, hi]. The miss
// is u at r=1 (positive when u stays positive).
struct RadialOracle {
  std::function<double(double)> f;
  int m = 0;     // N-1 for the radial problem, 0 for the 1-D problem
  int dim = 1;   // N in the series, 1 for the 1-D problem
  int steps = 10240;
  double r0 = 1e-3;

  std::array<double, 2> launch(double u0) const {
    const double f0 = f(u0);
    const double r = m > 0 ? r0 : 0.0;
    return {u0 - f0 * r * r / (2.0 * dim), -f0 * r / dim};
  }
  Rhs2 rhs() const {
    return [this](double r, const std::array<double, 2>& y) {
      return std::array<double, 2>{y[1], -f(y[0]) - (m > 0 ? m * y[1] / r : 0.0)};
    };
  }
  double start() const { return m > 0 ? r0 : 0.0; }
  double end_value(double u0) const { return rk4(rhs(), start(), launch(u0), 1.0, steps)[0]; }
  double solve_u0(double lo, double hi) const {
    return bisect([this](double u0) { return end_value(u0); }, lo, hi, 1e-13 * hi);
  }
  // u at r_i = start + i h for the final trajectory.
  std::vector<std::array<double, 2>> path(double u0) const {
    std::vector<std::array<double, 2>> p;
    rk4(rhs(), start(), launch(u0), 1.0, steps, &p);
    return p;
  }
};

// Eigenvalues of a symmetric tridiagonal matrix (diag d, off-diagonal e of
// size n-1) below x, by the Sturm sequence of leading minors.
inline int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double denom = q != 0.0 ? q : 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

inline double tridiagonal_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int k, double lo,
                                     double hi) {
  // k-th smallest (1-based)
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) >= k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// -z'' - q(x) z = α z, z'(0) = 0 (mirror ghost), z(1) = 0, n cells. The
// ghost row is symmetrized with weight 1/2 at x = 0.
inline std::vector<double> alpha_fd(const std::function<double(double)>& q, int n, int k) {
  const double h = 1.0 / n, h2 = h * h;
  std::vector<double> d(n), e(n - 1);
  for (int i = 0; i < n; ++i) d[i] = 2.0 / h2 - q(i * h);
  for (int i = 0; i + 1 < n; ++i) e[i] = -1.0 / h2 * (i == 0 ? std::sqrt(2.0) : 1.0);
  std::vector<double> out;
  for (int j = 1; j <= k; ++j) out.push_back(tridiagonal_eigenvalue(d, e, j, -1e4, 1e6));
  return out;
}

// Thomas algorithm: a_i x_{i-1} + b_i x_i + c_i x_{i+1} = r_i.
inline std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                  std::vector<double> r) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    r[i] -= m * r[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = r[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / b[i];
  return x;
}

// w'' + c/r w' - s(r) w = 0 on [0,1], w'(0) = 0, w(1) = w1; at r = 0 the
// equation reads (1 + c) w'' = s w. Returns w at r_i = i/n.
inline std::vector<double> factored_bvp(double c, const std::function<double(double)>& s, double w1, int n) {
  const double h = 1.0 / n, h2 = h * h;
  std::vector<double> a(n), b(n), cc(n), r(n, 0.0);
  // node 0 with ghost w_{-1} = w_1
  b[0] = -2.0 * (1.0 + c) / h2 - s(0.0);
  cc[0] = 2.0 * (1.0 + c) / h2;
  for (int i = 1; i < n; ++i) {
    const double x = i * h;
    a[i] = 1.0 / h2 - c / (2.0 * h * x);
    b[i] = -2.0 / h2 - s(x);
    cc[i] = 1.0 / h2 + c / (2.0 * h * x);
  }
  r[n - 1] -= cc[n - 1] * w1;
  cc[n - 1] = 0.0;
  auto w = thomas(a, b, cc, r);
  w.push_back(w1);
  return w;
}

// Singular eigenvalue ν̂ of -(r^{N-1} z')' - r^{N-1} q z = ν̂ r^{N-3} z with
// z(0) = z(1) = 0, by a conservative FD scheme made symmetric.
inline double nuhat_fd(const std::function<double(double)>& q, int dim, int n) {
  const double h = 1.0 / n;
  const int m = n - 1;  // interior nodes 1..n-1
  std::vector<double> d(m), e(m - 1);
  auto rw = [&](double r) { return std::pow(r, dim - 1); };
  for (int i = 1; i <= m; ++i) {
    const double r = i * h;
    const double b = std::pow(r, dim - 3);
    const double diag = (rw(r - h / 2) + rw(r + h / 2)) / (h * h) - rw(r) * q(r);
    d[i - 1] = diag / b;
    if (i < m) {
      const double off = -rw(r + h / 2) / (h * h);
      e[i - 1] = off / std::sqrt(b * std::pow(r + h, dim - 3));
    }
  }
  return tridiagonal_eigenvalue(d, e, 1, -1e3, 1e3);
}

// Singular eigenvalue by shooting: z = r^γ w, γ² + (N-2)γ + ν̂ = 0, RK4 on
// w'' + (2γ+N-1)/r w' + q w = 0 from a series launch at r0; ν̂₁ is where w
// first acquires a zero in (r0, 1]. Plain bisection on that predicate.
inline double nuhat_shoot(const std::function<double(double)>& q, int dim, double lo, double hi, double tol,
                          int steps = 20000, double r0 = 1e-3) {
  const double q0 = q(0.0);
  auto has_zero = [&](double nu) {
    const double b = dim - 2.0;
    const double gamma = 0.5 * (-b + std::sqrt(b * b - 4.0 * nu));
    const double c = 2.0 * gamma + dim - 1.0;
    Rhs2 f = [&](double r, const std::array<double, 2>& y) {
      return std::array<double, 2>{y[1], -c / r * y[1] - q(r) * y[0]};
    };
    std::vector<std::array<double, 2>> path;
    rk4(f, r0, {1.0 - q0 * r0 * r0 / (2.0 * (c + 1.0)), -q0 * r0 / (c + 1.0)}, 1.0, steps, &path);
    for (const auto& y : path)
      if (y[0] <= 0.0) return true;
    return false;
  };
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (has_zero(mid)) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// First positive zero of J1' using the standard library Bessel function.
inline double j1_prime_zero() {
  auto dj = [](double x) { return 0.5 * (std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(2.0, x)); };
  return bisect(dj, 1.5, 2.5, 1e-15);
}

// Deterministic generator for property tests.
struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  double uniform(double lo, double hi) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double u = static_cast<double>(s >> 11) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * u;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform(0.0, 1.0) * (hi - lo + 1)) % (hi - lo + 1); }
};

}  // namespace oracle
