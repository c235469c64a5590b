#include "shapestab/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "shapestab/errors.hpp"

namespace shapestab {

double find_root(const std::function<double(double)>& fn, double lo, double hi, double tol,
                 int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
  double a = lo, b = hi;
  double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root", "no sign change in [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = fn(b);
    if (!std::isfinite(fb)) throw BracketError("find_root", "function not finite at " + std::to_string(b));
  }
  throw ConvergenceError("find_root", "max_iter=" + std::to_string(max_iter) + " exceeded");
}

}  // namespace shapestab
