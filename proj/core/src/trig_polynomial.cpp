// SPDX-License-Identifier: Apache-2.0
#include "stabint/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace stabint {

using Complex = std::complex<double>;

TrigPolynomial::TrigPolynomial(int lo, std::vector<Complex> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "trig polynomial needs at least one coefficient");
}

TrigPolynomial TrigPolynomial::zero(int lo, int hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "trig polynomial range hi < lo");
  return TrigPolynomial(lo, std::vector<Complex>(static_cast<std::size_t>(hi - lo + 1)));
}

Complex TrigPolynomial::coeff(int k) const noexcept {
  if (k < lo_ || k > hi()) return Complex(0.0, 0.0);
  return coeffs_[static_cast<std::size_t>(k - lo_)];
}

Complex& TrigPolynomial::operator[](int k) {
  if (k < lo_ || k > hi()) throw Error(ErrorCode::InvalidArgument, "trig polynomial index out of range");
  return coeffs_[static_cast<std::size_t>(k - lo_)];
}

Complex TrigPolynomial::operator()(double theta) const {
  // Horner in e^{i theta}, then shift by e^{i lo theta}.
  const Complex z = std::polar(1.0, theta);
  Complex acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * std::polar(1.0, lo_ * theta);
}

TrigPolynomial TrigPolynomial::conj_reflect() const {
  std::vector<Complex> out(coeffs_.rbegin(), coeffs_.rend());
  for (auto& v : out) v = std::conj(v);
  return TrigPolynomial(-hi(), std::move(out));
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& other) const {
  TrigPolynomial out = zero(lo_ + other.lo_, hi() + other.hi());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out.coeffs_[i + j] += coeffs_[i] * other.coeffs_[j];
  return out;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& other) const {
  TrigPolynomial out = zero(std::min(lo_, other.lo_), std::max(hi(), other.hi()));
  for (int k = out.lo(); k <= out.hi(); ++k) out[k] = coeff(k) + other.coeff(k);
  return out;
}

TrigPolynomial TrigPolynomial::operator-(const TrigPolynomial& other) const { return *this + other.scaled(-1.0); }

TrigPolynomial TrigPolynomial::scaled(Complex s) const {
  TrigPolynomial out = *this;
  for (auto& v : out.coeffs_) v *= s;
  return out;
}

double TrigPolynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace stabint
