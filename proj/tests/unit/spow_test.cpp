// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <iostream>

#include "test_support.hpp"

namespace {

using stabint::Complex;
using stabint::Exponent;
using stabint::spow;
using stabint::spow_inv;
using stabint::spow_vec;
namespace ts = stabint::testsupport;

TEST(SignedPower, UnitInputIsFixed) {
  for (double b : {0.1, 0.5, 1.0, 4.0 / 3.0, 2.0, 7.5}) EXPECT_EQ(spow(Complex(1, 0), Exponent(b)), Complex(1, 0));
}

TEST(SignedPower, ExponentOneConjugates) { EXPECT_EQ(spow(Complex(0, 1), Exponent(1.0)), Complex(0, -1)); }

TEST(SignedPower, RealCube) { EXPECT_NEAR(std::abs(spow(Complex(2, 0), Exponent(3.0)) - 8.0), 0.0, 1e-14); }

TEST(SignedPower, DiagonalSquare) {
  // |1+i| conj(1+i) = sqrt(2) (1 - i)
  const Complex v = spow(Complex(1, 1), Exponent(2.0));
  EXPECT_NEAR(v.real(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v.imag(), -std::sqrt(2.0), 1e-15);
}

TEST(SignedPower, ZeroMapsToZeroForSmallExponents) {
  for (double b : {0.05, 0.5, 1.0, 3.0}) EXPECT_EQ(spow(Complex(0, 0), Exponent(b)), Complex(0, 0));
}

TEST(SignedPower, ExponentMustBePositive) {
  EXPECT_THROW(Exponent(0.0), stabint::Error);
  EXPECT_THROW(Exponent(-1.0), stabint::Error);
  EXPECT_THROW(Exponent(std::nan("")), stabint::Error);
  try {
    Exponent e(0.0);
    (void)e;
  } catch (const stabint::Error& e) {
    EXPECT_EQ(e.code(), stabint::ErrorCode::InvalidArgument);
  }
}

TEST(SignedPower, VectorForm) {
  const std::vector<Complex> zeros{0.0, 0.0};
  EXPECT_EQ(spow_vec(zeros, Exponent(0.7)), zeros);
  const std::vector<Complex> unit{1.0, Complex(0, 1)};
  const auto c = spow_vec(unit, Exponent(1.0));
  EXPECT_EQ(c[0], Complex(1, 0));
  EXPECT_EQ(c[1], Complex(0, -1));
  const std::vector<Complex> twos{2.0, 2.0};
  for (const Complex& v : spow_vec(twos, Exponent(3.0))) EXPECT_NEAR(std::abs(v - 8.0), 0.0, 1e-14);

  Eigen::VectorXcd e(3);
  e << Complex(1, 2), Complex(-0.5, 0.1), 0.0;
  const Eigen::VectorXcd out = spow_vec(e, Exponent(1.5));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_EQ(out(i), spow(e(i), Exponent(1.5)));
}

TEST(SignedPower, InverseExamples) {
  EXPECT_NEAR(std::abs(spow_inv(Complex(8, 0), Exponent(3.0)) - 2.0), 0.0, 1e-14);
  EXPECT_EQ(spow_inv(Complex(0, -1), Exponent(1.0)), Complex(0, 1));
}

TEST(SignedPower, InverseRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> expo(0.2, 3.0);
  for (int t = 0; t < 2000; ++t) {
    const Complex z = ts::random_complex(rng, 3.0);
    const Exponent b(expo(rng));
    EXPECT_TRUE(ts::close(spow_inv(spow(z, b), b), z)) << z << " b=" << b.value();
  }
}

TEST(SignedPower, IdentityCatalog) {
  const auto results = ts::run_spow_identities(10000, 2024);
  int errata = 0;
  for (const auto& r : results) {
    if (r.erratum) {
      if (!r.holds) {
        ++errata;
        std::cout << "[errata] " << r.name << ": " << r.statement << "\n         counterexample " << r.counterexample
                  << '\n';
      }
      continue;
    }
    EXPECT_TRUE(r.holds) << r.name << " (" << r.statement << "): " << r.counterexample;
    EXPECT_LE(r.max_rel_error, 1e-12) << r.name;
    EXPECT_GE(r.trials, 10000);
  }
  EXPECT_EQ(errata, 1);
}

}  // namespace
