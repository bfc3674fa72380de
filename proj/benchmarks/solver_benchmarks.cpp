// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <vector>

#include "stabint/stabint.hpp"

namespace {

using namespace stabint;

Eigen::MatrixXcd two_point_weights() {
  Eigen::MatrixXcd a(1, 2);
  a << 1.0, 1.0;
  return a;
}

ProblemSpec ar1_problem(double alpha, std::size_t grid) {
  ProblemSpec p;
  p.alpha = alpha;
  p.weights = two_point_weights();
  p.f = PowTrigMagnitude{TrigPolynomial(0, {0.5, 1.0}), -alpha};
  p.grid = AngleGrid(grid);
  return p;
}

void BM_SolveAlpha43(benchmark::State& state) {
  const ProblemSpec p = ar1_problem(4.0 / 3.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_coefficients(p).error);
}
BENCHMARK(BM_SolveAlpha43)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SolveGaussian(benchmark::State& state) {
  const ProblemSpec p = ar1_problem(2.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_special(p).error);
}
BENCHMARK(BM_SolveGaussian)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_FourierCoeffs(benchmark::State& state) {
  const AngleGrid grid(static_cast<std::size_t>(state.range(0)));
  std::vector<double> v(grid.size());
  for (std::size_t m = 0; m < v.size(); ++m) v[m] = 1.0 / (1.25 + std::cos(grid.node(m)));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_coeffs(std::span<const double>(v), grid, 16));
}
BENCHMARK(BM_FourierCoeffs)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_SimulatePaths(benchmark::State& state) {
  SimConfig cfg;
  cfg.alpha = 1.5;
  cfg.f = RationalAR{1.0, 0.5};
  cfg.replicates = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(cfg).signal.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePaths)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LeastFavorableD0(benchmark::State& state) {
  MinimaxProblem p;
  p.alpha = 1.5;
  p.weights.resize(2);
  p.weights << 1.0, 0.5;
  p.grid = AngleGrid(512);
  for (auto _ : state) benchmark::DoNotOptimize(least_favorable_D0(p, 1.0).delta);
}
BENCHMARK(BM_LeastFavorableD0)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
