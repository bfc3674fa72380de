// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "stabint/error.hpp"

namespace stabint {

/// Finite sum P(theta) = sum_{k=lo}^{hi} coeff(k) e^{i k theta}.
class TrigPolynomial {
 public:
  TrigPolynomial() : lo_(0), coeffs_(1, std::complex<double>(0.0, 0.0)) {}
  TrigPolynomial(int lo, std::vector<std::complex<double>> coeffs);

  static TrigPolynomial zero(int lo, int hi);

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Zero outside [lo, hi].
  std::complex<double> coeff(int k) const noexcept;
  std::complex<double>& operator[](int k);
  const std::vector<std::complex<double>>& coeffs() const noexcept { return coeffs_; }

  std::complex<double> operator()(double theta) const;

  TrigPolynomial conj_reflect() const;  // Q(theta) = conj(P(theta))
  TrigPolynomial operator*(const TrigPolynomial& other) const;
  TrigPolynomial operator+(const TrigPolynomial& other) const;
  TrigPolynomial operator-(const TrigPolynomial& other) const;
  TrigPolynomial scaled(std::complex<double> s) const;

  double max_abs_coeff() const noexcept;

 private:
  int lo_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace stabint
