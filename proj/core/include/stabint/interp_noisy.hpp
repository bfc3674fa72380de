// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "stabint/problem.hpp"

namespace stabint {

struct PointwiseOptions {
  double tol = 1e-14;
  int max_iterations = 100;
};

/// Solves f spow(A - h, alpha-1) - g spow(h, alpha-1) = C at one node.
Eigen::VectorXcd pointwise_h(const Eigen::MatrixXcd& f_val, const Eigen::MatrixXcd& g_val,
                             const Eigen::VectorXcd& A_val, const Eigen::VectorXcd& C_val, double alpha,
                             const PointwiseOptions& options = {}, const Eigen::VectorXcd* warm = nullptr);

/// Noisy characteristic on the grid for given c, M x T.
Eigen::MatrixXcd characteristic_noisy(const NoisyProblemSpec& problem, const Eigen::MatrixXcd& c);

Eigen::MatrixXcd residual_noisy(const NoisyProblemSpec& problem, const Eigen::MatrixXcd& c);

Solution solve_coefficients_noisy(const NoisyProblemSpec& problem);

double error_norm_noisy(const NoisyProblemSpec& problem, const Eigen::MatrixXcd& h_grid);
inline double error_norm_noisy(const NoisyProblemSpec& problem, const Solution& s) {
  return error_norm_noisy(problem, s.h_grid);
}

double pointwise_equation_defect(const NoisyProblemSpec& problem, const Solution& s);

/// Block matrices with block(k, j) = coefficient(k - j), each (N+1)T square.
struct BlockMatrixSet {
  Eigen::MatrixXcd B;  // from [(f+g)^{-1}]^T
  Eigen::MatrixXcd D;  // from [f (f+g)^{-1}]^T
  Eigen::MatrixXcd R;  // from [f (f+g)^{-1} g]^T
  int dim = 1;
  int horizon = 0;

  Eigen::MatrixXcd block(const Eigen::MatrixXcd& m, int k, int j) const {
    return m.block(k * dim, j * dim, dim, dim);
  }
};

BlockMatrixSet build_blocks(const SpectralDensity& f, const SpectralDensity& g, int N, const AngleGrid& grid);

/// Coefficients under the e^{+ij lambda} convention of the alpha = 2 pipeline.
Eigen::MatrixXcd to_stationary_convention(const Eigen::MatrixXcd& c);
Eigen::MatrixXcd from_stationary_convention(const Eigen::MatrixXcd& c);

struct StationarySolution {
  Solution solution;              // coefficients in the e^{-ij theta} convention
  Eigen::MatrixXcd c_stationary;  // B^{-1} D a, e^{+ij lambda} convention
  double delta = 0.0;             // <a, R a> + <c, B c>; solution.error = 2 pi delta
  BlockMatrixSet blocks;
};

StationarySolution stationary_pipeline(const NoisyProblemSpec& problem);

}  // namespace stabint
