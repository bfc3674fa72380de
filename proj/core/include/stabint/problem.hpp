// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stabint/angle_grid.hpp"
#include "stabint/density.hpp"
#include "stabint/newton.hpp"

namespace stabint {

struct SolverOptions {
  double newton_tol = 1e-10;  // relative to 1 + |a|
  int max_iterations = 200;
  double fd_step = 1e-7;
  double cond_limit = 1e14;
  int fourier_window = 16;
  int multistart = 8;
  std::uint64_t seed = 20240917;
  double positivity_floor = 1e-12;
  bool continuation = true;
};

/// Interpolation of sum_{j=0}^{N} a(j)^T xi(j) from observations outside 0..N.
struct ProblemSpec {
  double alpha = 2.0;
  Eigen::MatrixXcd weights;  // T x (N+1), column j is a(j)
  SpectralDensity f;
  AngleGrid grid;
  SolverOptions options;

  int dim() const noexcept { return static_cast<int>(weights.rows()); }
  int horizon() const noexcept { return static_cast<int>(weights.cols()) - 1; }
  double tolerance() const noexcept;

  /// Throws InvalidArgument or ShapeMismatch.
  void validate() const;
};

struct NoisyProblemSpec : ProblemSpec {
  SpectralDensity g;
};

struct Diagnostics {
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  int starts = 1;
  std::string method;
};

struct Solution {
  Eigen::MatrixXcd c;       // T x (N+1)
  Eigen::MatrixXcd h_grid;  // M x T
  Eigen::MatrixXcd error_grid;  // A - h, M x T, formed without cancellation; may be empty
  std::vector<TrigPolynomial> h_fourier;  // one per component
  double error = 0.0;
  Diagnostics diagnostics;
};

NewtonOptions newton_options(const ProblemSpec& problem);

/// sum_j w(:, j) e^{sign i j theta_m} at every node, M x T.
Eigen::MatrixXcd weights_on_grid(const Eigen::MatrixXcd& w, const AngleGrid& grid, int sign);

/// Fourier window of each column of an M x T field.
std::vector<TrigPolynomial> fourier_window(const Eigen::MatrixXcd& values, const AngleGrid& grid, int K);

/// |int e^{-ik theta} h dtheta| for k = 0..N, maximized.
double orthogonality_defect(const ProblemSpec& problem, const Eigen::MatrixXcd& h_grid);

/// Real packing (Re, Im) of a complex matrix, column by column.
Eigen::VectorXd pack(const Eigen::MatrixXcd& c);
Eigen::MatrixXcd unpack(const Eigen::VectorXd& x, int rows, int cols);

}  // namespace stabint
