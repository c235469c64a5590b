#include "shapestab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shapestab/errors.hpp"

namespace shapestab {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, double tol, int max_sweeps) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi_eigen: matrix size mismatch");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  bool converged = n < 2;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(A(i, j)));
    if (off <= tol * std::max(scale, 1e-300)) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) throw ConvergenceError("jacobi_eigen", "off-diagonal mass did not vanish");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return A(i, i) < A(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = A(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors[k * n + j] = v[k * n + order[j]];
  }
  return out;
}

void BandedCholesky::factor() {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t jmin = i > bw_ ? i - bw_ : 0;
    for (std::size_t j = jmin; j <= i; ++j) {
      // L(i,j) = (A(i,j) - Σ_k L(i,k) L(j,k)) / L(j,j)
      double s = at(i, i - j);
      const std::size_t kmin = std::max(jmin, j > bw_ ? j - bw_ : 0);
      for (std::size_t k = kmin; k < j; ++k) s -= at(i, i - k) * at(j, j - k);
      if (j == i) {
        if (!(s > 0.0)) throw SolverError("banded_cholesky", "matrix is not positive definite");
        at(i, 0) = std::sqrt(s);
      } else {
        at(i, i - j) = s / at(j, 0);
      }
    }
  }
}

void BandedCholesky::solve(std::span<double> x) const {
  if (x.size() != n_) throw std::invalid_argument("BandedCholesky::solve: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double s = x[i];
    const std::size_t kmin = i > bw_ ? i - bw_ : 0;
    for (std::size_t k = kmin; k < i; ++k) s -= at(i, i - k) * x[k];
    x[i] = s / at(i, 0);
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = x[ii];
    const std::size_t kmax = std::min(n_ - 1, ii + bw_);
    for (std::size_t k = ii + 1; k <= kmax; ++k) s -= at(k, k - ii) * x[k];
    x[ii] = s / at(ii, 0);
  }
}

}  // namespace shapestab
