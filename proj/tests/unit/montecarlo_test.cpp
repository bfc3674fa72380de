// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace {

using namespace stabint;
namespace ts = stabint::testsupport;
constexpr double kPi = std::numbers::pi;

SimConfig config(double alpha, SpectralDensity f, std::size_t R, std::uint64_t seed = 5) {
  SimConfig c;
  c.alpha = alpha;
  c.f = std::move(f);
  c.replicates = R;
  c.seed = seed;
  c.lo = -4;
  c.hi = 4;
  c.grid_size = 64;
  c.threads = 1;
  return c;
}

TEST(MonteCarlo, ZeroDensityGivesZeroPaths) {
  const SamplePaths p = simulate_paths(config(1.5, SpectralDensity::constant(0.0), 50));
  for (const Complex& z : p.signal) EXPECT_EQ(z, Complex(0.0, 0.0));
}

TEST(MonteCarlo, DeterministicForSeed) {
  const SamplePaths a = simulate_paths(config(1.4, ts::ar1_density(-1.0), 200, 9));
  const SamplePaths b = simulate_paths(config(1.4, ts::ar1_density(-1.0), 200, 9));
  EXPECT_EQ(a.signal, b.signal);
  const SamplePaths c = simulate_paths(config(1.4, ts::ar1_density(-1.0), 200, 10));
  EXPECT_NE(a.signal, c.signal);
}

TEST(MonteCarlo, ThreadCountDoesNotChangePaths) {
  SimConfig one = config(1.7, ts::ar1_density(-1.0), 300, 4);
  SimConfig many = one;
  many.threads = 3;
  EXPECT_EQ(simulate_paths(one).signal, simulate_paths(many).signal);
}

TEST(MonteCarlo, DensityScalingScalesPaths) {
  const double alpha = 1.5, s = 3.0;
  const SamplePaths a = simulate_paths(config(alpha, ts::ar1_density(-1.0), 100, 2));
  const SamplePaths b = simulate_paths(config(alpha, ts::ar1_density(-1.0).scaled(s), 100, 2));
  const double k = std::pow(s, 1.0 / alpha);
  for (std::size_t i = 0; i < a.signal.size(); ++i) EXPECT_NEAR(std::abs(b.signal[i] - k * a.signal[i]), 0.0, 1e-12 * (1 + std::abs(b.signal[i])));
}

TEST(MonteCarlo, GaussianLagCovariance) {
  const SpectralDensity f = RationalAR{1.0, 0.5};
  const std::size_t R = 40000;
  const SamplePaths p = simulate_paths(config(2.0, f, R, 77));
  const AngleGrid g(64);
  for (int lag : {0, 1, 2}) {
    Complex want = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) want += std::polar(1.0, lag * g.node(m)) * f.at(g.node(m))(0, 0).real();
    want *= g.spacing();
    Complex mean = 0.0;
    double second = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      const Complex v = p.xi(r, lag) * std::conj(p.xi(r, 0));
      mean += v;
      second += std::norm(v);
    }
    mean /= static_cast<double>(R);
    const double stderr_ = std::sqrt((second / R - std::norm(mean)) / R);
    EXPECT_LT(std::abs(mean - want), 4 * stderr_) << "lag " << lag << " want " << want << " got " << mean;
  }
}

TEST(MonteCarlo, IsotropicStableCharacteristicFunction) {
  std::mt19937_64 rng(123);
  const double alpha = 1.3, sigma = 0.8;
  const int n = 200000;
  std::vector<Complex> z(n);
  for (auto& v : z) v = sample_isotropic_stable(alpha, sigma, rng);
  for (double t : {0.5, 1.0, 2.0}) {
    double acc = 0.0;
    for (const Complex& v : z) acc += std::cos(t * v.real());
    EXPECT_NEAR(acc / n, std::exp(-std::pow(sigma * t / 2, alpha)), 0.01) << t;
  }
}

TEST(MonteCarlo, PositiveStableLaplaceTransform) {
  std::mt19937_64 rng(321);
  const double a = 0.65;
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::exp(-sample_positive_stable(a, rng));
  EXPECT_NEAR(acc / n, std::exp(-1.0), 0.005);
}

TEST(MonteCarlo, IdenticalCharacteristicsGiveIdenticalStatistics) {
  const ProblemSpec prob = ts::make_problem(2.0, ts::row({1.0, 1.0}), ts::ar1_density(-2.0), 256);
  const Solution s = solve_coefficients(prob);
  SimConfig c = config(2.0, prob.f, 500);
  c.lo = -12;
  c.hi = 12;
  const ComparisonReport rep = empirical_compare(simulate_paths(c), s.h_fourier, s.h_fourier, prob.weights);
  EXPECT_TRUE(rep.identical);
  EXPECT_EQ(rep.optimal.mse, rep.perturbed.mse);
  EXPECT_EQ(rep.optimal.abs_errors, rep.perturbed.abs_errors);
}

TEST(MonteCarlo, GaussianOptimalDominatesPerturbed) {
  const ProblemSpec prob = ts::make_problem(2.0, ts::row({1.0, 1.0}), ts::ar1_density(-2.0), 256);
  const Solution s = solve_coefficients(prob);
  SimConfig c = config(2.0, prob.f, 20000, 2024);
  c.grid_size = 256;
  c.lo = -16;
  c.hi = 17;
  std::vector<TrigPolynomial> perturbed = s.h_fourier;
  perturbed[0] = perturbed[0] + TrigPolynomial(2, {0.25});
  const double predicted = 16 * kPi / 7;
  const ComparisonReport rep = empirical_compare(simulate_paths(c), s.h_fourier, perturbed, prob.weights, predicted);
  EXPECT_LT(std::abs(rep.optimal.mse - predicted), 4 * rep.optimal.mse_stderr);
  EXPECT_GT(rep.perturbed.mse, rep.optimal.mse);
  EXPECT_FALSE(rep.identical);
  EXPECT_EQ(rep.optimal.abs_errors.size(), 20000u);
}

}  // namespace
