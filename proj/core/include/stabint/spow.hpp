// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "stabint/error.hpp"

namespace stabint {

using Complex = std::complex<double>;

/// Strictly positive real exponent.
class Exponent {
 public:
  explicit Exponent(double beta) : beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw Error(ErrorCode::InvalidArgument, "exponent must be finite and > 0");
    }
  }
  double value() const noexcept { return beta_; }

 private:
  double beta_;
};

/// Signed power |z|^(beta-1) * conj(z), extended by 0 at the origin.
inline Complex spow(Complex z, Exponent beta) noexcept {
  const double r = std::abs(z);
  if (r == 0.0) return Complex(0.0, 0.0);
  const double b = beta.value();
  if (b == 1.0) return std::conj(z);
  return std::pow(r, b - 1.0) * std::conj(z);
}

/// Inverse of spow in its first argument.
inline Complex spow_inv(Complex v, Exponent beta) noexcept {
  return spow(v, Exponent(1.0 / beta.value()));
}

inline void spow_vec(std::span<const Complex> v, Exponent beta, std::span<Complex> out) noexcept {
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = spow(v[i], beta);
}

inline std::vector<Complex> spow_vec(std::span<const Complex> v, Exponent beta) {
  std::vector<Complex> out(v.size());
  spow_vec(v, beta, out);
  return out;
}

inline Eigen::VectorXcd spow_vec(const Eigen::VectorXcd& v, Exponent beta) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = spow(v(i), beta);
  return out;
}

}  // namespace stabint
