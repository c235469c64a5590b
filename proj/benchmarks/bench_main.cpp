#include <benchmark/benchmark.h>

#include "shapestab/fd_spectrum.hpp"
#include "shapestab/neumann.hpp"
#include "shapestab/profile.hpp"
#include "shapestab/spectra.hpp"
#include "shapestab/stability.hpp"

using namespace shapestab;

static void BM_SolveRadialLaneEmden(benchmark::State& state) {
  const auto nl = Nonlinearity::lane_emden(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_radial(nl, 3).u_at_0);
}
BENCHMARK(BM_SolveRadialLaneEmden)->Unit(benchmark::kMillisecond);

static void BM_Solve1dScan(benchmark::State& state) {
  const auto nl = Nonlinearity::linear(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_1d(nl).u_at_0);
}
BENCHMARK(BM_Solve1dScan)->Unit(benchmark::kMillisecond);

static void BM_AlphaSpectrum(benchmark::State& state) {
  const Profile p = solve_1d(Nonlinearity::lane_emden(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(alpha_spectrum(p, static_cast<int>(state.range(0))).back().value);
}
BENCHMARK(BM_AlphaSpectrum)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_NuhatFirst(benchmark::State& state) {
  const Profile p = solve_radial(Nonlinearity::lane_emden(3.0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(nuhat_first(p).eigen->value);
}
BENCHMARK(BM_NuhatFirst)->Unit(benchmark::kMillisecond);

static void BM_CapEigenvalue(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(neumann_lambda1(NeumannDomain::cap(1.0, 3)));
}
BENCHMARK(BM_CapEigenvalue)->Unit(benchmark::kMillisecond);

static void BM_FdSpectrum(benchmark::State& state) {
  const Profile p = solve_1d(Nonlinearity::lane_emden(2.0));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fd_spectrum_2d(p, 1.0, n, 4).front());
}
BENCHMARK(BM_FdSpectrum)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_ClassifyCone(benchmark::State& state) {
  const Profile p = solve_radial(Nonlinearity::lane_emden(3.0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(classify_cone(p, 2.5).d1);
}
BENCHMARK(BM_ClassifyCone)->Unit(benchmark::kMillisecond);

static void BM_SweepRho(benchmark::State& state) {
  const Profile p = solve_1d(Nonlinearity::torsion());
  for (auto _ : state) benchmark::DoNotOptimize(sweep_rho(p, 0.5, 3.0, 26).crossing);
}
BENCHMARK(BM_SweepRho)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
