#include "shapestab/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

namespace shapestab {

namespace {

// Integral over [x0, x2] of the parabola through three nodes.
double simpson_pair(double x0, double x1, double x2, double y0, double y1, double y2) {
  const double h0 = x1 - x0;
  const double h1 = x2 - x1;
  const double hs = h0 + h1;
  return hs / 6.0 *
         (y0 * (2.0 - h1 / h0) + y1 * hs * hs / (h0 * h1) + y2 * (2.0 - h0 / h1));
}

// Integral over [x1, x2] of the parabola through (x0, x1, x2).
double last_interval(double x0, double x1, double x2, double y0, double y1, double y2) {
  const double h0 = x1 - x0;
  const double h1 = x2 - x1;
  const double w2 = h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
  const double w1 = h1 * (h1 + 3.0 * h0) / (6.0 * h0);
  const double w0 = -h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  return w0 * y0 + w1 * y1 + w2 * y2;
}

}  // namespace

double simpson(std::span<const double> x, std::span<const double> y, std::size_t first) {
  if (x.size() != y.size()) throw std::invalid_argument("simpson: size mismatch");
  if (x.size() < first + 2) return 0.0;
  const std::size_t intervals = x.size() - 1 - first;
  double sum = 0.0;
  std::size_t i = first;
  for (; i + 2 < x.size(); i += 2) {
    sum += simpson_pair(x[i], x[i + 1], x[i + 2], y[i], y[i + 1], y[i + 2]);
  }
  if (intervals % 2 == 1) {
    const std::size_t k = x.size() - 1;
    if (intervals == 1) {
      sum += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    } else {
      sum += last_interval(x[k - 2], x[k - 1], x[k], y[k - 2], y[k - 1], y[k]);
    }
  }
  return sum;
}

void fd_first_derivative_weights(std::span<const double> x, std::size_t i, std::size_t& start,
                                 double (&weights)[5]) {
  if (x.size() < 5) throw std::invalid_argument("fd_first_derivative_weights: need 5 nodes");
  start = i < 2 ? 0 : std::min(i - 2, x.size() - 5);
  const double z = x[i];
  // Fornberg's recursion for derivative orders 0 and 1.
  double c[5][2] = {};
  double c1 = 1.0;
  double c4 = x[start] - z;
  c[0][0] = 1.0;
  for (std::size_t k = 1; k < 5; ++k) {
    const std::size_t mn = std::min<std::size_t>(k, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[start + k] - z;
    for (std::size_t j = 0; j < k; ++j) {
      const double c3 = x[start + k] - x[start + j];
      c2 *= c3;
      if (j == k - 1) {
        for (std::size_t m = mn; m >= 1; --m) {
          c[k][m] = c1 * (static_cast<double>(m) * c[k - 1][m - 1] - c5 * c[k - 1][m]) / c2;
        }
        c[k][0] = -c1 * c5 * c[k - 1][0] / c2;
      }
      for (std::size_t m = mn; m >= 1; --m) {
        c[j][m] = (c4 * c[j][m] - static_cast<double>(m) * c[j][m - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  for (std::size_t k = 0; k < 5; ++k) weights[k] = c[k][1];
}

}  // namespace shapestab
