// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "stabint/angle_grid.hpp"
#include "stabint/density.hpp"

namespace stabint::detail {

using Complex = std::complex<double>;

/// Fourier coefficients of a matrix field (one T x T per node), entries k + K for k = -K..K.
std::vector<Eigen::MatrixXcd> matrix_fourier(const std::vector<Eigen::MatrixXcd>& field, const AngleGrid& grid,
                                             int K);

/// (N+1)T square matrix with block(k, j) = coeffs[k - j + N].
Eigen::MatrixXcd block_toeplitz(const std::vector<Eigen::MatrixXcd>& coeffs, int N);

/// Column-major stacking of a T x (N+1) matrix into a vector of length T(N+1).
Eigen::VectorXcd stack(const Eigen::MatrixXcd& w);
Eigen::MatrixXcd unstack(const Eigen::VectorXcd& v, int T);

double condition_number(const Eigen::MatrixXcd& m);

std::vector<Eigen::MatrixXcd> field_matrices(const DensityField& field);

}  // namespace stabint::detail
