// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace {

using namespace stabint;
namespace ts = stabint::testsupport;
constexpr double kPi = std::numbers::pi;

template <typename Fn>
void expect_error(Fn&& fn, ErrorCode code) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(AngleGrid, NodesAndSpacing) {
  const AngleGrid g(16);
  EXPECT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g.node(0), -kPi);
  EXPECT_NEAR(g.node(8), 0.0, 1e-15);
  EXPECT_NEAR(g.spacing(), 2 * kPi / 16, 1e-15);
}

TEST(AngleGrid, RejectsBadSizes) {
  expect_error([] { AngleGrid g(12); }, ErrorCode::InvalidArgument);
  expect_error([] { AngleGrid g(4); }, ErrorCode::InvalidArgument);
}

TEST(Density, ScalarEvaluation) {
  EXPECT_DOUBLE_EQ(evaluate(ScalarDensity(ConstantDensity{3.0 / (2 * kPi)}), 0.4), 3.0 / (2 * kPi));
  EXPECT_NEAR(ts::ar1_density(-4.0 / 3.0).at(0.0)(0, 0).real(), std::pow(1.5, -4.0 / 3.0), 1e-14);
  for (double t : {-3.0, -1.0, 0.0, 2.5}) EXPECT_NEAR(evaluate(ScalarDensity(RationalAR{1.0, 0.0}), t), 1 / (2 * kPi), 1e-15);
  // |1 - b e^{i t}|^2 at t = 0 is (1 - b)^2
  EXPECT_NEAR(evaluate(ScalarDensity(RationalAR{2.0, 0.5}), 0.0), 2.0 / (2 * kPi * 0.25), 1e-14);
}

TEST(Density, SampledInterpolatesLinearlyAndWraps) {
  SampledDensity s{{-kPi, -kPi / 2, 0.0, kPi / 2}, {1.0, 2.0, 3.0, 4.0}};
  EXPECT_NEAR(evaluate(ScalarDensity(s), -kPi / 4), 2.5, 1e-14);
  EXPECT_NEAR(evaluate(ScalarDensity(s), 3 * kPi / 4), 2.5, 1e-14);
}

TEST(Density, InvalidParametersRejected) {
  expect_error([] { SpectralDensity(RationalAR{1.0, 1.0}).eval(AngleGrid(64)); }, ErrorCode::InvalidArgument);
  expect_error([] { SpectralDensity(ConstantDensity{std::nan("")}).eval(AngleGrid(64)); },
               ErrorCode::InvalidArgument);
  const SpectralDensity spiky = PowTrigMagnitude{TrigPolynomial(0, {1.0, -1.0}), -1.0};
  expect_error([&] { spiky.eval(AngleGrid(64)); }, ErrorCode::NonFiniteValue);
}

TEST(FourierCoeffs, ConstantIsDelta) {
  const AngleGrid g(64);
  std::vector<double> v(g.size(), 1.0);
  const TrigPolynomial r = fourier_coeffs(std::span<const double>(v), g, 4);
  EXPECT_NEAR(std::abs(r.coeff(0) - 1.0), 0.0, 1e-14);
  for (int k = -4; k <= 4; ++k)
    if (k != 0) EXPECT_NEAR(std::abs(r.coeff(k)), 0.0, 1e-14);
}

TEST(FourierCoeffs, QuarticModulus) {
  const double d = 0.3;
  const AngleGrid g(128);
  std::vector<double> v(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) v[m] = std::pow(std::abs(std::polar(1.0, g.node(m)) + d), 4);
  const TrigPolynomial r = fourier_coeffs(std::span<const double>(v), g, 3);
  EXPECT_NEAR(std::abs(r.coeff(0) - (1 + 4 * d * d + std::pow(d, 4))), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r.coeff(1) - (2 * d + 2 * d * d * d)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r.coeff(-1) - (2 * d + 2 * d * d * d)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r.coeff(2) - d * d), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r.coeff(-2) - d * d), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r.coeff(3)), 0.0, 1e-13);
}

TEST(FourierCoeffs, Cosine) {
  const AngleGrid g(32);
  std::vector<double> v(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) v[m] = 2 * std::cos(g.node(m));
  const TrigPolynomial r = fourier_coeffs(std::span<const double>(v), g, 3);
  for (int k = -3; k <= 3; ++k) EXPECT_NEAR(std::abs(r.coeff(k) - (std::abs(k) == 1 ? 1.0 : 0.0)), 0.0, 1e-14);
}

TEST(FourierCoeffs, ReconstructsTrigPolynomialAndRealInputIsConjugateSymmetric) {
  std::mt19937_64 rng(3);
  std::vector<Complex> c(7);
  for (auto& z : c) z = ts::random_complex(rng);
  const TrigPolynomial p(-3, c);
  const AngleGrid g(64);
  const auto vals = evaluate_on_grid(p, g);
  const TrigPolynomial back = fourier_coeffs(std::span<const Complex>(vals), g, 5);
  for (int k = -5; k <= 5; ++k) EXPECT_NEAR(std::abs(back.coeff(k) - p.coeff(k)), 0.0, 1e-13) << k;

  std::vector<double> real(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) real[m] = std::exp(std::sin(g.node(m)));
  const TrigPolynomial r = fourier_coeffs(std::span<const double>(real), g, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(std::abs(r.coeff(-k) - std::conj(r.coeff(k))), 0.0, 1e-15);
}

TEST(NegPower, ReproducesQuarticFromAlpha43Density) {
  const double d = 0.5;
  const TrigPolynomial r = neg_power_coeffs(ts::ar1_density(-4.0 / 3.0), 3.0, 3, AngleGrid(256));
  EXPECT_NEAR(std::abs(r.coeff(0) - (1 + 4 * d * d + std::pow(d, 4))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coeff(1) - (2 * d + 2 * d * d * d)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coeff(-2) - d * d), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coeff(3)), 0.0, 1e-12);
}

TEST(NegPower, ConstantAndRational) {
  const TrigPolynomial c = neg_power_coeffs(SpectralDensity::constant(0.25), 1.5, 2, AngleGrid(64));
  EXPECT_NEAR(std::abs(c.coeff(0) - std::pow(0.25, -1.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c.coeff(1)), 0.0, 1e-12);

  const double P = 3.0, b = 0.4;
  const TrigPolynomial r = neg_power_coeffs(RationalAR{P, b}, 1.0, 3, AngleGrid(64));
  const double s = 2 * kPi / P;
  EXPECT_NEAR(std::abs(r.coeff(0) - s * (1 + b * b)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coeff(1) + s * b), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coeff(-1) + s * b), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.coeff(2)), 0.0, 1e-12);
}

TEST(NegPower, CoarseGridDetected) {
  const SpectralDensity f = PowTrigMagnitude{TrigPolynomial(0, {1.0, 0.95}), 2.0};
  expect_error([&] { neg_power_coeffs(f, 1.0, 2, AngleGrid(8)); }, ErrorCode::GridTooCoarse);
}

TEST(NegPower, VanishingDensityRejected) {
  const SpectralDensity f = PowTrigMagnitude{TrigPolynomial(0, {1.0, -1.0}), 1.0};
  expect_error([&] { neg_power_coeffs(f, 1.0, 2, AngleGrid(64)); }, ErrorCode::DensityVanishes);
}

TEST(Minimality, ConstantDensityValue) {
  const auto rep = check_minimality(SpectralDensity::constant(1 / (2 * kPi)), nullptr, 2.0, AngleGrid(256));
  EXPECT_TRUE(rep.finite);
  EXPECT_NEAR(rep.value, 4 * kPi * kPi, 1e-10);
}

TEST(Minimality, Alpha43DensityIsFinite) {
  const auto rep = check_minimality(ts::ar1_density(-4.0 / 3.0), nullptr, 4.0 / 3.0, AngleGrid(1024));
  EXPECT_TRUE(rep.finite);
  EXPECT_GT(rep.value, 0.0);
}

TEST(Minimality, CriticalZeroFlagged) {
  // f^{-1/(alpha-1)} behaves like 1/|theta| near 0
  const double alpha = 1.5;
  const SpectralDensity f = PowTrigMagnitude{TrigPolynomial(0, {1.0, -1.0}), alpha - 1.0};
  const auto rep = check_minimality(f, nullptr, alpha, AngleGrid(4096));
  EXPECT_FALSE(rep.finite) << rep.value;
}

TEST(Minimality, NoiseRestoresMinimality) {
  const double alpha = 1.5;
  const SpectralDensity f = PowTrigMagnitude{TrigPolynomial(0, {1.0, -1.0}), alpha - 1.0};
  const SpectralDensity g = SpectralDensity::constant(0.1);
  EXPECT_TRUE(check_minimality(f, &g, alpha, AngleGrid(1024)).finite);
}

TEST(MatrixDensity, StructuredIsHermitianPsd) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralDensity f = ts::random_matrix_density(rng, 2, 2);
    const DensityField field = f.eval(AngleGrid(128));
    EXPECT_NO_THROW(field.check_hermitian_psd());
    EXPECT_GT(field.eigen_range().first, 0.0);
    const Eigen::MatrixXcd m = f.at(0.3);
    EXPECT_NEAR((m - m.adjoint()).norm(), 0.0, 1e-14);
  }
}

TEST(MatrixDensity, NonHermitianRejected) {
  Eigen::MatrixXcd w(2, 2);
  w << 1.0, 0.5, 0.1, 1.0;
  expect_error([&] { SpectralDensity::structured(2, {{w, ConstantDensity{1.0}}}); }, ErrorCode::InvalidArgument);
  Eigen::MatrixXcd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  expect_error([&] { SpectralDensity::structured(2, {{indefinite, ConstantDensity{1.0}}}); },
               ErrorCode::InvalidArgument);
}

TEST(MatrixDensity, HermitianPower) {
  Eigen::MatrixXcd m(2, 2);
  m << 2.0, Complex(0, 1), Complex(0, -1), 2.0;
  const Eigen::MatrixXcd inv = hermitian_power(m, -1.0);
  EXPECT_NEAR((inv * m - Eigen::MatrixXcd::Identity(2, 2)).norm(), 0.0, 1e-13);
  const Eigen::MatrixXcd root = hermitian_power(m, 0.5);
  EXPECT_NEAR((root * root - m).norm(), 0.0, 1e-13);
}

}  // namespace
