// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>

#include "stabint/problem.hpp"

namespace stabint {

/// R_k(c) = int e^{-ik theta} h(theta; c) dtheta, k = 0..N, as a T x (N+1) matrix.
Eigen::MatrixXcd residual(const ProblemSpec& problem, const Eigen::MatrixXcd& c);

/// Spectral characteristic A - spow(f^{-1} C, 1/(alpha-1)) on the grid, M x T.
Eigen::MatrixXcd characteristic(const ProblemSpec& problem, const Eigen::MatrixXcd& c);

/// warm, when given, is tried first as the Newton start.
Solution solve_coefficients(const ProblemSpec& problem, const Eigen::MatrixXcd* warm = nullptr);

/// Closed form for N = 0, T = 1.
std::complex<double> single_point_closed_form(std::complex<double> a, const SpectralDensity& f, double alpha,
                                              const AngleGrid& grid = AngleGrid());

/// Coefficients of |C|^2 (alpha, indices -N..N) and of C conj(C)^2 (b, indices -N..2N),
/// where C(theta) = sum_j c_j e^{-ij theta}; b_n multiplies e^{i n theta}.
struct CubicExpansion {
  TrigPolynomial modulus_sq;
  TrigPolynomial cubic;
};
CubicExpansion cubic_signed_power_coeffs(std::span<const std::complex<double>> c);

/// alpha = 4/3 polynomial path; cross-checked against solve_coefficients.
Solution alpha43_expansion(const ProblemSpec& problem);

/// alpha = 2 block-Toeplitz linear solve.
Solution gaussian_special(const ProblemSpec& problem);

double error_norm(const ProblemSpec& problem, const Eigen::MatrixXcd& c);
inline double error_norm(const ProblemSpec& problem, const Solution& s) { return error_norm(problem, s.c); }

/// max_m |f spow(A - h, alpha-1) - C| over max_m (|f| |A - h|^{alpha-1} + |C|).
double defining_equation_defect(const ProblemSpec& problem, const Solution& s);

/// Largest deviation of c over seeded random restarts around the returned solution.
double multistart_spread(const ProblemSpec& problem, const Solution& reference, int starts);

}  // namespace stabint
