#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shapestab {

/// Eigen-decomposition of a dense symmetric n×n matrix (row-major) by cyclic
/// Jacobi rotations. Eigenvalues ascend; column j of `vectors` (row-major,
/// n×n) belongs to values[j].
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, double tol = 1e-14, int max_sweeps = 100);

/// Cholesky factor of a symmetric positive definite band matrix with
/// `bandwidth` sub-diagonals, stored as L(i, i-d) for d = 0..bandwidth.
class BandedCholesky {
 public:
  /// `entry(i, d)` returns A(i, i-d) for 0 <= d <= bandwidth, d <= i.
  template <class Entry>
  BandedCholesky(std::size_t n, std::size_t bandwidth, Entry entry) : n_(n), bw_(bandwidth), l_(n * (bandwidth + 1)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d <= bw_ && d <= i; ++d) at(i, d) = entry(i, d);
    factor();
  }

  std::size_t size() const noexcept { return n_; }

  /// Overwrites x = A⁻¹ x.
  void solve(std::span<double> x) const;

 private:
  double& at(std::size_t i, std::size_t d) { return l_[i * (bw_ + 1) + d]; }
  double at(std::size_t i, std::size_t d) const { return l_[i * (bw_ + 1) + d]; }
  void factor();

  std::size_t n_;
  std::size_t bw_;
  std::vector<double> l_;
};

}  // namespace shapestab
