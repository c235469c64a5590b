#pragma once

#include <cstddef>
#include <span>

namespace shapestab {

/// Composite Simpson rule on a possibly non-uniform grid, over nodes
/// [first, x.size()). An odd trailing interval uses the three-point rule
/// through the preceding node.
double simpson(std::span<const double> x, std::span<const double> y, std::size_t first = 0);

/// Weights of the derivative at x[i] of the degree-4 interpolant through the
/// five nearest nodes (Fornberg). Requires x.size() >= 5.
void fd_first_derivative_weights(std::span<const double> x, std::size_t i, std::size_t& start,
                                 double (&weights)[5]);

}  // namespace shapestab
