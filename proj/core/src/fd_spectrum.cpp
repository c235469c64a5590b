#include "shapestab/fd_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "shapestab/errors.hpp"
#include "shapestab/linalg.hpp"

namespace shapestab {

namespace {

// Symmetrized operator S = W^{1/2} K W^{-1/2}, where W holds the trapezoid
// weights (½ on Neumann edges) that make W K symmetric.
class Operator {
 public:
  Operator(const std::function<double(double)>& q, double L, int n) : n_(n) {
    m_ = std::max(1, static_cast<int>(std::lround(L * n)));
    hy2_ = 1.0 / (static_cast<double>(n) * n);
    const double hx = L / m_;
    hx2_ = hx * hx;
    q_.resize(n);
    for (int i = 0; i < n; ++i) q_[i] = q(static_cast<double>(i) / n);
  }

  std::size_t size() const { return static_cast<std::size_t>(n_) * (m_ + 1); }
  std::size_t bandwidth() const { return static_cast<std::size_t>(n_); }
  double qmax() const { return *std::max_element(q_.begin(), q_.end()); }

  double diag(int i) const { return 2.0 / hy2_ + 2.0 / hx2_ - q_[i]; }

  double wy(int i) const { return i == 0 ? 0.5 : 1.0; }
  double wx(int j) const { return (j == 0 || j == m_) ? 0.5 : 1.0; }

  // S(a, a - d) for d in {0, 1, n}.
  double lower(std::size_t a, std::size_t d) const {
    const int j = static_cast<int>(a / n_), i = static_cast<int>(a % n_);
    if (d == 0) return diag(i);
    if (d == 1 && i > 0) return entry(i, j, i - 1, j);
    if (d == static_cast<std::size_t>(n_) && j > 0) return entry(i, j, i, j - 1);
    return 0.0;
  }

  // y = S x
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(size(), 0.0);
    for (int j = 0; j <= m_; ++j) {
      for (int i = 0; i < n_; ++i) {
        const std::size_t a = static_cast<std::size_t>(j) * n_ + i;
        double s = diag(i) * x[a];
        if (i > 0) s += entry(i, j, i - 1, j) * x[a - 1];
        if (i + 1 < n_) s += entry(i, j, i + 1, j) * x[a + 1];
        if (j > 0) s += entry(i, j, i, j - 1) * x[a - n_];
        if (j < m_) s += entry(i, j, i, j + 1) * x[a + n_];
        y[a] = s;
      }
    }
  }

 private:
  // Nonsymmetric K between neighbours, mirror ghosts doubling the inward
  // coupling on Neumann rows, then symmetrized.
  double entry(int i, int j, int i2, int j2) const {
    double k = 0.0;
    if (j == j2) k = (i == 0 ? -2.0 : -1.0) / hy2_;
    else k = ((j == 0 || j == m_) ? -2.0 : -1.0) / hx2_;
    const double wa = wy(i) * wx(j), wb = wy(i2) * wx(j2);
    return std::sqrt(wa / wb) * k;
  }

  int n_;
  int m_;
  double hy2_, hx2_;
  std::vector<double> q_;
};

void orthonormalize(std::vector<std::vector<double>>& cols) {
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t d = 0; d < c; ++d) {
        double dot = 0.0;
        for (std::size_t i = 0; i < cols[c].size(); ++i) dot += cols[c][i] * cols[d][i];
        for (std::size_t i = 0; i < cols[c].size(); ++i) cols[c][i] -= dot * cols[d][i];
      }
    }
    double norm = 0.0;
    for (double x : cols[c]) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw SolverError("fd_spectrum_2d", "subspace collapsed");
    for (double& x : cols[c]) x /= norm;
  }
}

}  // namespace

std::vector<double> fd_spectrum_2d(const std::function<double(double)>& potential, double L, int n, int k) {
  const std::string op = "fd_spectrum_2d";
  if (n < 2 || n > 128) throw std::invalid_argument(op + ": n must be in [2, 128]");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument(op + ": L must be positive");
  if (k < 1) throw std::invalid_argument(op + ": k must be >= 1");
  const Operator S(potential, L, n);
  const std::size_t size = S.size();
  if (static_cast<std::size_t>(k) > size) throw std::invalid_argument(op + ": k exceeds the matrix size");

  const double sigma = -S.qmax() - 1.0;
  const std::size_t block = std::min(size, static_cast<std::size_t>(k) + 8);

  if (block == size) {
    std::vector<double> dense(size * size, 0.0), e(size, 0.0), col;
    for (std::size_t b = 0; b < size; ++b) {
      std::fill(e.begin(), e.end(), 0.0);
      e[b] = 1.0;
      S.apply(e, col);
      for (std::size_t a = 0; a < size; ++a) dense[a * size + b] = col[a];
    }
    auto eig = jacobi_eigen(std::move(dense), size);
    return {eig.values.begin(), eig.values.begin() + k};
  }

  const BandedCholesky chol(size, S.bandwidth(), [&](std::size_t a, std::size_t d) {
    return S.lower(a, d) - (d == 0 ? sigma : 0.0);
  });

  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<std::vector<double>> x(block, std::vector<double>(size));
  for (auto& c : x)
    for (double& v : c) v = uni(rng);
  orthonormalize(x);

  std::vector<double> prev(k, 0.0), ax;
  for (int iter = 0; iter < 2000; ++iter) {
    for (auto& c : x) chol.solve(c);
    orthonormalize(x);
    std::vector<std::vector<double>> sx(block);
    for (std::size_t c = 0; c < block; ++c) S.apply(x[c], sx[c]);
    std::vector<double> h(block * block);
    for (std::size_t a = 0; a < block; ++a)
      for (std::size_t b = a; b < block; ++b) {
        double dot = 0.0;
        for (std::size_t i = 0; i < size; ++i) dot += x[a][i] * sx[b][i];
        h[a * block + b] = h[b * block + a] = dot;
      }
    const auto eig = jacobi_eigen(h, block);
    std::vector<std::vector<double>> rotated(block, std::vector<double>(size, 0.0));
    for (std::size_t c = 0; c < block; ++c)
      for (std::size_t a = 0; a < block; ++a) {
        const double w = eig.vectors[a * block + c];
        for (std::size_t i = 0; i < size; ++i) rotated[c][i] += w * x[a][i];
      }
    x = std::move(rotated);

    bool done = iter > 0;
    for (int i = 0; i < k; ++i) {
      if (std::abs(eig.values[i] - prev[i]) > 1e-12 * std::max(1.0, std::abs(eig.values[i]))) done = false;
      prev[i] = eig.values[i];
    }
    if (done) return prev;
  }
  throw ConvergenceError(op, "subspace iteration did not converge");
}

std::vector<double> fd_spectrum_2d(const Profile& p, double L, int n, int k) {
  if (p.geometry != Geometry::cylinder) throw std::invalid_argument("fd_spectrum_2d: needs a cylinder profile");
  const Nonlinearity& nl = p.nonlinearity;
  return fd_spectrum_2d([&p, &nl](double x) { return nl.df(p.value_at(x)); }, L, n, k);
}

}  // namespace shapestab
