// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

using namespace stabint;
namespace ts = stabint::testsupport;

TEST(Periodic, IndexBijection) {
  for (int T : {1, 2, 3, 5}) {
    for (int j = 0; j < 40; ++j) {
      const auto [n, k] = block_index(j, T);
      EXPECT_EQ(n, j / T);
      EXPECT_EQ(k, j % T);
      EXPECT_EQ(flat_index(n, k, T), j);
    }
  }
  EXPECT_THROW(block_index(3, 0), Error);
  EXPECT_THROW(block_index(-1, 2), Error);
  EXPECT_THROW(flat_index(0, 2, 2), Error);
}

TEST(Periodic, BlockWeightsLayout) {
  PeriodicSpec s{2, 1, {1.0, 2.0, 3.0, 4.0}};
  const Eigen::MatrixXcd w = block_weights(s);
  ASSERT_EQ(w.rows(), 2);
  ASSERT_EQ(w.cols(), 2);
  EXPECT_EQ(w(0, 0), Complex(1.0));
  EXPECT_EQ(w(1, 0), Complex(2.0));
  EXPECT_EQ(w(0, 1), Complex(3.0));
  EXPECT_EQ(w(1, 1), Complex(4.0));
  EXPECT_EQ(unblock(w), s);

  PeriodicSpec single{2, 0, {Complex(0.5, 1.0), -2.0}};
  const Eigen::MatrixXcd v = block_weights(single);
  EXPECT_EQ(v.cols(), 1);
  EXPECT_EQ(v(0, 0), Complex(0.5, 1.0));
  EXPECT_EQ(v(1, 0), Complex(-2.0));
}

TEST(Periodic, WrongLengthRejected) {
  try {
    block_weights(PeriodicSpec{3, 1, {1.0, 2.0}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Periodic, RoundTripRandom) {
  std::mt19937_64 rng(2);
  for (int T = 1; T <= 4; ++T)
    for (int N = 0; N <= 3; ++N) {
      PeriodicSpec s{T, N, {}};
      for (int j = 0; j < T * (N + 1); ++j) s.weights.push_back(ts::random_complex(rng));
      EXPECT_EQ(unblock(block_weights(s)), s);
    }
}

TEST(Periodic, UnitPeriodIsScalarProblem) {
  std::mt19937_64 rng(3);
  const SpectralDensity f = ts::random_trig_density(rng, 2);
  PeriodicSpec s{1, 2, {1.0, Complex(0.3, -0.2), 0.5}};
  const ProblemSpec blocked = block_problem(s, f, 1.7, AngleGrid(512));
  const ProblemSpec direct = ts::make_problem(1.7, ts::row({1.0, Complex(0.3, -0.2), 0.5}), f, 512);
  const Solution a = solve_coefficients(blocked);
  const Solution b = solve_coefficients(direct);
  EXPECT_LT((a.c - b.c).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(a.error, b.error, 1e-12 * b.error);
}

TEST(Periodic, BlockedProblemSolves) {
  std::mt19937_64 rng(4);
  const SpectralDensity f = ts::random_matrix_density(rng, 2, 1);
  PeriodicSpec s{2, 1, {1.0, 0.5, -0.25, 0.75}};
  const ProblemSpec p = block_problem(s, f, 1.8, AngleGrid(512));
  EXPECT_EQ(p.dim(), 2);
  EXPECT_EQ(p.horizon(), 1);
  const Solution sol = solve_coefficients(p);
  EXPECT_TRUE(sol.diagnostics.converged);
  EXPECT_LE(orthogonality_defect(p, sol.h_grid), 1e-8 * (1 + p.weights.norm()));

  const NoisyProblemSpec q = block_noisy_problem(s, f, f.scaled(0.1), 1.8, AngleGrid(512));
  EXPECT_EQ(q.g.dim(), 2);
  EXPECT_EQ(q.weights, p.weights);
}

}  // namespace
