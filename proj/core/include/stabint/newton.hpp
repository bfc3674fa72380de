// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include <Eigen/Core>

namespace stabint {

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  double fd_step = 1e-7;
  double cond_limit = 1e14;
  double armijo = 1e-4;
  int max_backtracks = 50;
};

enum class NewtonStatus { Converged, MaxIterations, Singular, Stalled, NonFinite };

struct NewtonResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  NewtonStatus status = NewtonStatus::MaxIterations;
  double condition = 0.0;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// Central differences with step fd_step * (1 + |x_i|).
Eigen::MatrixXd fd_jacobian(const ResidualFn& F, const Eigen::VectorXd& x, double fd_step);

/// Damped Newton with Armijo backtracking on |F|^2.
NewtonResult damped_newton(const ResidualFn& F, Eigen::VectorXd x0, const NewtonOptions& options,
                           const JacobianFn& jacobian = {});

}  // namespace stabint
