// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "stabint/trig_polynomial.hpp"

namespace stabint {

/// Causal factor gamma_0..gamma_N with |sum_k gamma_k e^{-ik theta}|^2 = p(theta), gamma_0 > 0.
/// p must be Hermitian (coeff(-k) = conj(coeff(k))) and nonnegative on the circle.
std::vector<std::complex<double>> fejer_riesz(const TrigPolynomial& p, double tol = 1e-10);

/// |sum_k gamma_k e^{-ik theta}|^2 expanded as a trig polynomial.
TrigPolynomial causal_power(const std::vector<std::complex<double>>& gamma);

}  // namespace stabint
