#include "shapestab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shapestab/errors.hpp"
#include "shapestab/roots.hpp"

namespace shapestab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension coefficients (Hairer, Norsett & Wanner, DOPRI5).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double error_norm(std::span<const double> err, std::span<const double> y0,
                  std::span<const double> y1, double rtol, double atol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sk;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Trajectory::Trajectory(std::size_t dimension, double rel_tol, double abs_tol)
    : dim_(dimension), rel_tol_(rel_tol), abs_tol_(abs_tol) {}

std::span<const double> Trajectory::state(std::size_t i) const {
  return {states_.data() + i * dim_, dim_};
}

void Trajectory::push_start(double t, std::span<const double> y) {
  times_.push_back(t);
  states_.insert(states_.end(), y.begin(), y.end());
}

void Trajectory::push_step(double t, std::span<const double> y, std::span<const double> dense) {
  steps_.push_back(t - times_.back());
  times_.push_back(t);
  states_.insert(states_.end(), y.begin(), y.end());
  dense_.insert(dense_.end(), dense.begin(), dense.end());
}

void Trajectory::truncate_at_event(double t) {
  // The last dense segment stays valid on [t_prev, t]; only the stored end moves.
  const std::size_t seg = size() - 2;
  std::vector<double> y(dim_);
  for (std::size_t c = 0; c < dim_; ++c) y[c] = eval(seg, t, c);
  times_.back() = t;
  std::copy(y.begin(), y.end(), states_.end() - static_cast<std::ptrdiff_t>(dim_));
  event_time_ = t;
}

std::size_t Trajectory::segment_for(double t) const {
  if (size() < 2) throw std::logic_error("Trajectory: no accepted steps");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto idx = static_cast<std::size_t>(it - times_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, size() - 2);
}

double Trajectory::eval(std::size_t seg, double t, std::size_t c) const {
  const double* r = dense_.data() + seg * 5 * dim_;
  const double theta = (t - times_[seg]) / steps_[seg];
  const double theta1 = 1.0 - theta;
  return r[c] +
         theta * (r[dim_ + c] +
                  theta1 * (r[2 * dim_ + c] + theta * (r[3 * dim_ + c] + theta1 * r[4 * dim_ + c])));
}

std::vector<double> Trajectory::at(double t) const {
  std::vector<double> y(dim_);
  if (size() == 1) {
    std::copy(states_.begin(), states_.end(), y.begin());
    return y;
  }
  const std::size_t seg = segment_for(t);
  for (std::size_t c = 0; c < dim_; ++c) y[c] = eval(seg, t, c);
  return y;
}

double Trajectory::component_at(double t, std::size_t c) const {
  if (size() == 1) return states_[c];
  return eval(segment_for(t), t, c);
}

std::vector<double> Trajectory::sample(std::span<const double> ts, std::size_t c) const {
  std::vector<double> out(ts.size());
  if (size() == 1) {
    std::fill(out.begin(), out.end(), states_[c]);
    return out;
  }
  std::size_t seg = 0;
  const std::size_t last = size() - 2;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    while (seg < last && t > times_[seg + 1]) ++seg;
    if (t < times_[seg]) seg = segment_for(t);
    // Exact step ends are returned verbatim so samples at accepted points
    // carry no interpolation error.
    if (t == times_[seg + 1]) {
      out[i] = states_[(seg + 1) * dim_ + c];
    } else {
      out[i] = eval(seg, t, c);
    }
  }
  return out;
}

Trajectory integrate_ivp(const OdeRhs& rhs, double t_start, std::span<const double> y_start,
                         double t_end, const IvpOptions& options) {
  const std::string& op = options.operation;
  if (!(t_end > t_start)) throw std::invalid_argument(op + ": t_end must exceed t_start");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0)) {
    throw std::invalid_argument(op + ": tolerances must be positive");
  }
  if (y_start.empty()) throw std::invalid_argument(op + ": empty state");
  if (!all_finite(y_start)) throw NonFiniteState(op, t_start);

  const std::size_t n = y_start.size();
  const double rtol = options.rel_tol;
  const double atol = options.abs_tol;

  Trajectory traj(n, rtol, atol);
  traj.push_start(t_start, y_start);

  std::vector<double> y(y_start.begin(), y_start.end());
  std::vector<double> y1(n), ytmp(n), err(n), dense(5 * n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  double t = t_start;
  rhs(t, y, k1);
  if (!all_finite(k1)) throw NonFiniteState(op, t);

  double h = options.initial_step;
  if (h <= 0.0) {
    // Starting step from the scale of y and y' (Hairer's heuristic, first stage).
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = atol + rtol * std::abs(y[i]);
      d0 += (y[i] / sk) * (y[i] / sk);
      d1n += (k1[i] / sk) * (k1[i] / sk);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1n = std::sqrt(d1n / static_cast<double>(n));
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, t_end - t_start);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k1[i];
    rhs(t + h, ytmp, k2);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = atol + rtol * std::abs(y[i]);
      d2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h;
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h, h1, t_end - t_start});
  }

  std::optional<double> g_prev;
  if (options.event) g_prev = options.event(t, y);

  std::vector<double> stops = options.stops;
  std::sort(stops.begin(), stops.end());
  std::size_t next_stop = 0;

  bool last_rejected = false;
  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > options.max_steps) {
      throw ConvergenceError(op, "maximum number of steps exceeded at t=" + std::to_string(t));
    }
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < h_min) throw StepSizeUnderflow(op, t);
    while (next_stop < stops.size() && stops[next_stop] <= t) ++next_stop;
    const double target = next_stop < stops.size() ? std::min(stops[next_stop], t_end) : t_end;
    bool final_step = false;
    double h_free = h;
    if (t + 1.01 * h >= target) {
      h = target - t;
      final_step = true;
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i) {
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const double t_new = final_step ? target : t + h;
    rhs(t_new, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i) {
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    rhs(t_new, y1, k7);

    const bool finite = all_finite(y1) && all_finite(k7);
    double err_norm = std::numeric_limits<double>::infinity();
    if (finite) {
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      }
      err_norm = error_norm(err, y, y1, rtol, atol);
    }

    if (!(err_norm <= 1.0)) {
      if (!finite && h <= h_min * 2.0) throw NonFiniteState(op, t);
      const double fac = std::isfinite(err_norm) ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.1;
      h *= std::min(1.0, fac);
      last_rejected = true;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      dense[i] = y[i];
      dense[n + i] = ydiff;
      dense[2 * n + i] = bspl;
      dense[3 * n + i] = ydiff - h * k7[i] - bspl;
      dense[4 * n + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    traj.push_step(t_new, y1, dense);

    if (options.event) {
      const double g_new = options.event(t_new, y1);
      const double g_old = *g_prev;
      if (g_old != 0.0 && (g_new == 0.0 || (g_old < 0.0) != (g_new < 0.0))) {
        double t_ev = t_new;
        if (g_new != 0.0) {
          auto g_at = [&](double s) { return options.event(s, traj.at(s)); };
          const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_new));
          t_ev = find_root(g_at, t, t_new, tol, 200);
        }
        traj.truncate_at_event(t_ev);
        return traj;
      }
      g_prev = g_new;
    }

    t = t_new;
    std::swap(y, y1);
    std::swap(k1, k7);

    double fac = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    fac = std::clamp(fac, 0.2, 5.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    h = final_step ? std::max(h * fac, std::min(h_free, 5.0 * h)) : h * fac;
  }
  return traj;
}

}  // namespace shapestab
