#pragma once

#include <functional>

namespace shapestab {

/// Brent's method: inverse quadratic / secant steps with a bisection
/// fallback. Requires fn(lo) and fn(hi) of opposite sign (an exact zero at
/// either end is returned directly). Terminates once the bracket is narrower
/// than `tol` or fn vanishes exactly.
///
/// Throws BracketError without a sign change and ConvergenceError when
/// `max_iter` is exceeded.
double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 double tol = 1e-12, int max_iter = 200);

}  // namespace shapestab
