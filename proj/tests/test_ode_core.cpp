#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "shapestab/errors.hpp"
#include "shapestab/grid.hpp"
#include "shapestab/nodes.hpp"
#include "shapestab/ode.hpp"
#include "shapestab/quadrature.hpp"
#include "shapestab/roots.hpp"

using namespace shapestab;

namespace {

Trajectory exp_growth(double rel, double abs) {
  OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
  const double y0[1] = {1.0};
  IvpOptions o;
  o.rel_tol = rel;
  o.abs_tol = abs;
  return integrate_ivp(rhs, 0.0, y0, 1.0, o);
}

Trajectory harmonic(double t_end, double tol = 1e-10) {
  OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  const double y0[2] = {1.0, 0.0};
  IvpOptions o;
  o.rel_tol = o.abs_tol = tol;
  return integrate_ivp(rhs, 0.0, y0, t_end, o);
}

}  // namespace

TEST_CASE("grid invariants") {
  const Grid g = Grid::uniform(5);
  CHECK(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == 0.5);
  CHECK(g.locate(0.3) == 1);
  CHECK(g.locate(1.0) == 3);
  CHECK(g.locate(-1.0) == 0);
  CHECK(g.refined().size() == 9);
  CHECK_THROWS_AS(Grid({0.0, 0.5, 0.4, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({0.0, 0.5, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({-0.1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid::uniform(1), std::invalid_argument);
  const Grid nu({0.0, 0.1, 0.5, 1.0});
  CHECK(nu.locate(0.3) == 1);
  CHECK(nu.locate(0.7) == 2);
}

TEST_CASE("integrate_ivp: exponential and cosine") {
  const Trajectory tr = exp_growth(1e-10, 1e-10);
  CHECK(std::abs(tr.final_state()[0] - std::exp(1.0)) < 1e-10);
  CHECK(tr.t_end() == 1.0);
  const Trajectory c = harmonic(std::numbers::pi);
  CHECK(std::abs(c.final_state()[0] + 1.0) < 1e-9);
}

TEST_CASE("integrate_ivp: dense output matches the solution between steps") {
  const Trajectory c = harmonic(std::numbers::pi, 1e-12);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = std::numbers::pi * i / 400.0;
    worst = std::max(worst, std::abs(c.component_at(t, 0) - std::cos(t)));
    worst = std::max(worst, std::abs(c.component_at(t, 1) + std::sin(t)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("integrate_ivp: torsion radial ODE from the series launch") {
  // u'' = -1 - 2/r u', u(ε) = (1-ε²)/6, u'(ε) = -ε/3  =>  u(1) = 0
  const double eps = 1e-6;
  OdeRhs rhs = [](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -1.0 - 2.0 / r * y[1];
  };
  const double y0[2] = {(1.0 - eps * eps) / 6.0, -eps / 3.0};
  const Trajectory tr = integrate_ivp(rhs, eps, y0, 1.0);
  CHECK(std::abs(tr.final_state()[0]) < 1e-9);
}

TEST_CASE("integrate_ivp: stops are hit exactly") {
  OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
  const double y0[1] = {1.0};
  IvpOptions o;
  o.stops = {0.125, 0.3, 0.7};
  const Trajectory tr = integrate_ivp(rhs, 0.0, y0, 1.0, o);
  for (double s : o.stops) {
    bool found = false;
    for (double t : tr.times()) found = found || t == s;
    CHECK(found);
  }
}

TEST_CASE("integrate_ivp: terminal event") {
  const double y0[2] = {1.0, 0.0};
  OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  IvpOptions o;
  o.event = [](double, std::span<const double> y) { return y[0]; };
  const Trajectory tr = integrate_ivp(rhs, 0.0, y0, 10.0, o);
  REQUIRE(tr.event_time());
  CHECK(std::abs(*tr.event_time() - std::numbers::pi / 2) < 1e-10);
  CHECK(tr.t_end() == *tr.event_time());
}

TEST_CASE("integrate_ivp: errors") {
  OdeRhs blow = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
  const double y0[1] = {1.0};
  bool reported = false;
  try {
    integrate_ivp(blow, 0.0, y0, 2.0);
  } catch (const StepSizeUnderflow& e) {
    reported = std::abs(e.time() - 1.0) < 1e-3;
  } catch (const NonFiniteState& e) {
    reported = std::abs(e.time() - 1.0) < 1e-3;
  }
  CHECK(reported);
  CHECK_THROWS_AS(integrate_ivp(blow, 1.0, y0, 1.0), std::invalid_argument);
  IvpOptions bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_ivp(blow, 0.0, y0, 0.5, bad), std::invalid_argument);
  OdeRhs nan_rhs = [](double t, std::span<const double>, std::span<double> dy) { dy[0] = t > 0.5 ? NAN : 1.0; };
  CHECK_THROWS_AS(integrate_ivp(nan_rhs, 0.0, y0, 1.0), SolverError);
}

TEST_CASE("integrate_ivp: halving tolerances moves the endpoint by less than 10x the coarse tolerance") {
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const double coarse = exp_growth(tol, tol).final_state()[0];
    const double fine = exp_growth(tol / 2, tol / 2).final_state()[0];
    CHECK(std::abs(coarse - fine) < 10.0 * tol * std::max(1.0, std::abs(coarse)));
    const double c1 = harmonic(3.0, tol).final_state()[0], c2 = harmonic(3.0, tol / 2).final_state()[0];
    CHECK(std::abs(c1 - c2) < 10.0 * tol);
  }
}

TEST_CASE("find_root examples") {
  CHECK(std::abs(find_root([](double t) { return t * t - 2.0; }, 1.0, 2.0, 1e-12) - std::sqrt(2.0)) < 1e-12);
  const double beta = find_root([](double t) { return std::sqrt(t) * std::tanh(std::sqrt(t)) - 1.0; }, 1.0, 2.0, 1e-12);
  CHECK(std::round(beta * 1000) / 1000 == doctest::Approx(1.439).epsilon(1e-12));
  const double beta_ref = oracle::bisect([](double t) { return std::sqrt(t) * std::tanh(std::sqrt(t)) - 1.0; }, 1.0, 2.0, 1e-14);
  CHECK(std::abs(beta - beta_ref) < 1e-11);
  CHECK(find_root([](double t) { return t; }, -1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double t) { return t * t + 1.0; }, -1.0, 1.0), BracketError);
  CHECK_THROWS_AS(find_root([](double t) { return std::cbrt(t - 0.3); }, -1.0, 1.0, 1e-300, 3), ConvergenceError);
}

TEST_CASE("find_root is independent of which end is negative") {
  oracle::Lcg rng(7);
  for (int i = 0; i < 50; ++i) {
    const double root = rng.uniform(-0.9, 0.9);
    const double a = rng.uniform(0.5, 3.0);
    auto f = [&](double t) { return std::tanh(a * (t - root)) + 0.1 * (t - root); };
    auto g = [&](double t) { return -f(t); };
    const double x1 = find_root(f, -1.0, 1.0, 1e-13);
    const double x2 = find_root(g, -1.0, 1.0, 1e-13);
    CHECK(std::abs(x1 - root) < 1e-12);
    CHECK(std::abs(x1 - x2) < 1e-12);
  }
}

TEST_CASE("count_nodes examples") {
  const std::vector<double> a{1, 2, 3}, b{1, -1, 1}, c{1, 0, -1}, d{1, 0, 1}, e{0, 1, -1, 0};
  CHECK(count_nodes(a) == 0);
  CHECK(count_nodes(b) == 2);
  CHECK(count_nodes(c) == 1);
  CHECK(count_nodes(d) == 0);
  CHECK(count_nodes(e) == 1);
  std::vector<double> cosine(200);
  for (int i = 0; i < 200; ++i) cosine[i] = std::cos(3.0 * std::numbers::pi * (i / 199.0) / 2.0);
  CHECK(count_nodes(cosine) == 1);
}

TEST_CASE("count_nodes is invariant under positive scaling and global sign change") {
  oracle::Lcg rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(rng.integer(1, 40));
    for (double& x : v) x = rng.integer(0, 4) == 0 ? 0.0 : rng.uniform(-1, 1);
    const int base = count_nodes(v);
    const double s = rng.uniform(1e-3, 1e3);
    std::vector<double> scaled = v, flipped = v;
    for (double& x : scaled) x *= s;
    for (double& x : flipped) x = -x;
    CHECK(count_nodes(scaled) == base);
    CHECK(count_nodes(flipped) == base);
  }
}

TEST_CASE("simpson and finite-difference weights") {
  const Grid g = Grid::uniform(101);
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) y[i] = std::sin(g[i]);
  CHECK(std::abs(simpson(g.nodes(), y) - (1.0 - std::cos(1.0))) < 1e-9);
  const Grid odd = Grid::uniform(100);  // odd number of intervals
  std::vector<double> z(odd.size());
  for (std::size_t i = 0; i < odd.size(); ++i) z[i] = std::exp(odd[i]);
  CHECK(std::abs(simpson(odd.nodes(), z) - (std::exp(1.0) - 1.0)) < 1e-8);
  const Grid nonuni({0.0, 0.1, 0.3, 0.35, 0.6, 0.8, 1.0});
  std::vector<double> cubic(nonuni.size());
  for (std::size_t i = 0; i < nonuni.size(); ++i) cubic[i] = nonuni[i] * nonuni[i];
  CHECK(std::abs(simpson(nonuni.nodes(), cubic) - 1.0 / 3.0) < 1e-14);
  for (std::size_t i : {0u, 3u, 50u, 99u}) {
    std::size_t start = 0;
    double w[5];
    fd_first_derivative_weights(odd.nodes(), i, start, w);
    double d = 0.0;
    for (int k = 0; k < 5; ++k) d += w[k] * z[start + k];
    CHECK(std::abs(d - std::exp(odd[i])) < 1e-8);
  }
}
