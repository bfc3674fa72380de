// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace {

using namespace stabint;
namespace ts = stabint::testsupport;
constexpr double kPi = std::numbers::pi;

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Residual, ZeroCoefficientsLeaveWeightTerm) {
  std::mt19937_64 rng(1);
  const ProblemSpec p = ts::make_problem(1.5, ts::random_weights(rng, 1, 2), ts::ar1_density(-1.0), 512);
  const Eigen::MatrixXcd R = residual(p, Eigen::MatrixXcd::Zero(1, 3));
  EXPECT_LT(max_diff(R, 2 * kPi * p.weights), 1e-12);
}

TEST(Residual, MatchesDirectQuadratureNearPublishedCoefficients) {
  const ProblemSpec p = ts::make_problem(4.0 / 3.0, ts::row({1.0, 1.0}), ts::ar1_density(-4.0 / 3.0));
  const Eigen::MatrixXcd c = ts::row({0.44, 0.44});
  const Eigen::MatrixXcd R = residual(p, c);
  const int M = 1 << 14;
  for (int k = 0; k <= 1; ++k) {
    Complex acc = 0.0;
    for (int m = 0; m < M; ++m) {
      const double t = -kPi + 2 * kPi * (m + 0.5) / M;
      const double f = std::pow(std::abs(std::polar(1.0, t) + 0.5), -4.0 / 3.0);
      const Complex A = 1.0 + std::polar(1.0, t);
      const Complex C = 0.44 + 0.44 * std::polar(1.0, -t);
      const Complex h = A - spow(C / f, Exponent(3.0));
      acc += std::polar(1.0, -k * t) * h;
    }
    EXPECT_NEAR(std::abs(R(0, k) - acc * 2.0 * kPi / static_cast<double>(M)), 0.0, 1e-10) << k;
  }
  // two-digit rounding of c moves the residual by about 0.23 because h is cubic in C / f
  EXPECT_LT(R.norm(), 0.25);
  EXPECT_LT(residual(p, solve_coefficients(p).c).norm(), 1e-9);
}

TEST(Noiseless, GaussianInstanceMatchesRationalValues) {
  const ProblemSpec p = ts::make_problem(2.0, ts::row({1.0, 1.0}), ts::ar1_density(-2.0));
  const Solution s = solve_coefficients(p);
  EXPECT_NEAR(std::abs(s.c(0, 0) - 4.0 / 7.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(s.c(0, 1) - 4.0 / 7.0), 0.0, 1e-10);
  EXPECT_NEAR(s.error, 16 * kPi / 7, 1e-10);
  const Solution g = gaussian_special(p);
  EXPECT_LT(max_diff(g.c, s.c), 1e-10);
  EXPECT_NEAR(g.error, s.error, 1e-10);
}

TEST(Noiseless, Alpha43Instance) {
  const ProblemSpec p = ts::make_problem(4.0 / 3.0, ts::row({1.0, 1.0}), ts::ar1_density(-4.0 / 3.0));
  const Solution s = solve_coefficients(p);
  EXPECT_TRUE(s.diagnostics.converged);
  EXPECT_NEAR(s.c(0, 0).real(), 0.44, 0.01);
  EXPECT_NEAR(s.c(0, 1).real(), 0.44, 0.01);
  EXPECT_NEAR(s.error, 5.57, 0.05);
  const std::map<int, double> h = {{-3, -0.02}, {-2, -0.17}, {-1, -0.57}, {2, -0.57}, {3, -0.17}, {4, -0.02}};
  for (const auto& [k, v] : h) EXPECT_NEAR(s.h_fourier[0].coeff(k).real(), v, 0.01) << k;
  for (int k = 0; k <= 1; ++k) EXPECT_NEAR(std::abs(s.h_fourier[0].coeff(k)), 0.0, 1e-9);

  const Solution e = alpha43_expansion(p);
  EXPECT_LT(max_diff(e.c, s.c), 1e-8);
}

TEST(Noiseless, CubicExpansionCoefficients) {
  const std::vector<Complex> c{Complex(0.3, 0.1), Complex(-0.2, 0.5)};
  const CubicExpansion x = cubic_signed_power_coeffs(c);
  EXPECT_NEAR(std::abs(x.cubic.coeff(-1) - std::conj(c[0]) * std::conj(c[0]) * c[1]) , 0.0, 1e-15);
  // compare against direct grid evaluation of |C|^2 conj(C), C = c0 + c1 e^{-i theta}
  const AngleGrid g(64);
  std::vector<Complex> vals(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    const Complex C = c[0] + c[1] * std::polar(1.0, -g.node(m));
    vals[m] = std::norm(C) * std::conj(C);
  }
  const TrigPolynomial direct = fourier_coeffs(std::span<const Complex>(vals), g, 3);
  for (int n = -3; n <= 3; ++n) EXPECT_NEAR(std::abs(direct.coeff(n) - x.cubic.coeff(n)), 0.0, 1e-14) << n;
}

TEST(Noiseless, SinglePointClosedFormMatchesSolver) {
  std::mt19937_64 rng(8);
  for (double alpha : {1.3, 1.6, 2.0}) {
    for (int t = 0; t < 3; ++t) {
      const SpectralDensity f = ts::random_trig_density(rng, 2, 0.5 + t);
      const Complex a = ts::random_complex(rng);
      const ProblemSpec p = ts::make_problem(alpha, ts::row({a}), f, 1024);
      const Solution s = solve_coefficients(p);
      EXPECT_NEAR(std::abs(s.c(0, 0) - single_point_closed_form(a, f, alpha, p.grid)), 0.0, 1e-9)
          << "alpha=" << alpha;
    }
  }
}

TEST(Noiseless, SinglePointGaussianFormulas) {
  // f = P/2pi |1 - b e^{i theta}|^{-2}: (1/2pi) int f^{-1} = 2pi (1 + b^2) / P
  const double P = 2.0, b = 0.3;
  const double mean_inverse = 2 * kPi * (1 + b * b) / P;
  const ProblemSpec p = ts::make_problem(2.0, ts::row({1.5}), RationalAR{P, b}, 256);
  const Solution s = solve_coefficients(p);
  EXPECT_NEAR(std::abs(s.c(0, 0) - 1.5 / mean_inverse), 0.0, 1e-12);
  EXPECT_NEAR(s.error, 2 * kPi * 1.5 * 1.5 / mean_inverse, 1e-11);

  const ProblemSpec unit = ts::make_problem(2.0, ts::row({Complex(0.7, 0.0)}), SpectralDensity::constant(1.0), 64);
  EXPECT_NEAR(std::abs(solve_coefficients(unit).c(0, 0) - 0.7), 0.0, 1e-13);
  const ProblemSpec flat =
      ts::make_problem(2.0, ts::row({Complex(0.7, 0.0)}), SpectralDensity::constant(1 / (2 * kPi)), 64);
  const Solution sf = solve_coefficients(flat);
  EXPECT_NEAR(std::abs(sf.c(0, 0) - 0.7 / (2 * kPi)), 0.0, 1e-13);
  EXPECT_NEAR(sf.error, 0.49, 1e-12);
}

TEST(Noiseless, ZeroWeightsGiveZero) {
  const ProblemSpec p = ts::make_problem(1.5, Eigen::MatrixXcd::Zero(1, 3), ts::ar1_density(-1.0), 256);
  const Solution s = solve_coefficients(p);
  EXPECT_EQ(s.c.norm(), 0.0);
  EXPECT_EQ(s.error, 0.0);
  EXPECT_EQ(error_norm(p, Eigen::MatrixXcd::Zero(1, 3)), 0.0);
  EXPECT_EQ(single_point_closed_form(0.0, ts::ar1_density(-1.0), 1.5, AngleGrid(256)), Complex(0, 0));
}

TEST(Noiseless, HomogeneityInWeights) {
  std::mt19937_64 rng(21);
  const double alpha = 1.6;
  const SpectralDensity f = ts::random_trig_density(rng, 2);
  const Eigen::MatrixXcd a = ts::random_weights(rng, 1, 2);
  const Solution base = solve_coefficients(ts::make_problem(alpha, a, f, 1024));
  const Complex s(1.7, -0.8);
  const Solution scaled = solve_coefficients(ts::make_problem(alpha, s * a, f, 1024));
  // c(s a) = spow(s, alpha - 1) c(a), error(s a) = |s|^alpha error(a)
  const Complex factor = std::pow(std::abs(s), alpha - 2) * std::conj(s);
  EXPECT_LT(max_diff(scaled.c, factor * base.c), 1e-8);
  EXPECT_NEAR(scaled.error, std::pow(std::abs(s), alpha) * base.error, 1e-8 * scaled.error);
}

TEST(Noiseless, SymmetricInstanceHasRealCoefficients) {
  const SpectralDensity f = PowTrigMagnitude{TrigPolynomial(0, {1.0, 0.3, -0.2}), -1.5};
  const Solution s = solve_coefficients(ts::make_problem(1.4, ts::row({1.0, -0.5, 0.25}), f, 1024));
  EXPECT_LT(s.c.imag().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Noiseless, AlphaTwoAgreesWithBlockToeplitzForMatrices) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 4; ++t) {
    const ProblemSpec p = ts::make_problem(2.0, ts::random_weights(rng, 2, 2), ts::random_matrix_density(rng, 2, 1), 512);
    const Solution s = solve_coefficients(p);
    const Solution g = gaussian_special(p);
    EXPECT_LT(max_diff(s.c, g.c), 1e-8);
    EXPECT_NEAR(s.error, g.error, 1e-8 * (1 + g.error));
  }
}

TEST(Noiseless, InvariantsOnRandomInstances) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> alpha_dist(1.2, 2.0);
  for (int t = 0; t < 6; ++t) {
    const int T = 1 + t % 2;
    const int N = t % 3 + 1;
    const ProblemSpec p =
        ts::make_problem(alpha_dist(rng), ts::random_weights(rng, T, N), ts::random_matrix_density(rng, T, 2), 1024);
    const Solution s = solve_coefficients(p);
    ASSERT_TRUE(s.diagnostics.converged);
    EXPECT_LE(orthogonality_defect(p, s.h_grid), 1e-8 * (1 + p.weights.norm()));
    EXPECT_LE(defining_equation_defect(p, s), 1e-8);
    EXPECT_NEAR(error_norm(p, s.c), s.error, 1e-10 * (1 + s.error));
    EXPECT_LE(multistart_spread(p, s, 3), 1e-6);
  }
}

TEST(Noiseless, ErrorCharacteristicKeepsPrecisionNearAlphaOne) {
  std::mt19937_64 rng(71);
  const ProblemSpec p = ts::make_problem(1.04, ts::random_weights(rng, 1, 2), ts::random_trig_density(rng, 2), 1024);
  const Solution s = solve_coefficients(p);
  ASSERT_EQ(s.error_grid.rows(), s.h_grid.rows());
  const Eigen::MatrixXcd A = weights_on_grid(p.weights, p.grid, +1);
  EXPECT_LT(max_diff(s.h_grid + s.error_grid, A), 1e-12 * (1 + A.cwiseAbs().maxCoeff()));
  EXPECT_LE(defining_equation_defect(p, s), 1e-8);
  // A - h rebuilt from h alone cannot resolve |A - h| far below eps |A|
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < s.error_grid.rows(); ++m) smallest = std::min(smallest, std::abs(s.error_grid(m, 0)));
  EXPECT_LT(smallest, 1e-16);
}

TEST(Noiseless, OptimalErrorIsMinimalAmongPerturbations) {
  std::mt19937_64 rng(51);
  const ProblemSpec p = ts::make_problem(1.5, ts::random_weights(rng, 1, 2), ts::random_trig_density(rng, 2), 1024);
  const Solution s = solve_coefficients(p);
  const Eigen::MatrixXcd A = weights_on_grid(p.weights, p.grid, 1);
  const DensityField f = p.f.eval(p.grid);
  auto error_of = [&](const Eigen::MatrixXcd& h) {
    double acc = 0.0;
    for (std::size_t m = 0; m < p.grid.size(); ++m)
      acc += std::pow(std::abs(A(static_cast<Eigen::Index>(m), 0) - h(static_cast<Eigen::Index>(m), 0)), p.alpha) *
             f.scalar(m);
    return acc * p.grid.spacing();
  };
  EXPECT_NEAR(error_of(s.h_grid), s.error, 1e-9 * s.error);
  for (int k : {-3, -5, 1, 4}) {  // phase(k) is e^{-ik theta}: modes 3, 5, -1, -4
    Eigen::MatrixXcd h = s.h_grid;
    for (std::size_t m = 0; m < p.grid.size(); ++m)
      h(static_cast<Eigen::Index>(m), 0) += 0.05 * p.grid.phase(k, m);
    EXPECT_GT(error_of(h), s.error) << k;
  }
}

TEST(ProblemValidation, ShapeAndDomainErrors) {
  ProblemSpec p = ts::make_problem(2.5, ts::row({1.0}), SpectralDensity::constant(1.0), 64);
  try {
    p.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  p.alpha = 1.5;
  p.weights = Eigen::MatrixXcd::Ones(2, 1);
  try {
    p.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

}  // namespace
