// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

using namespace stabint;

TEST(Newton, SolvesSmoothSystem) {
  const ResidualFn F = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    r << x(0) * x(0) + x(1) * x(1) - 4.0, x(0) - x(1);
    return r;
  };
  Eigen::VectorXd x0(2);
  x0 << 3.0, 0.5;
  const NewtonResult res = damped_newton(F, x0, NewtonOptions{});
  EXPECT_EQ(res.status, NewtonStatus::Converged);
  EXPECT_NEAR(res.x(0), std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(res.x(1), std::sqrt(2.0), 1e-10);
}

TEST(Newton, FiniteDifferenceJacobianOfLinearMap) {
  Eigen::MatrixXd A(2, 3);
  A << 1, 2, 3, -1, 0.5, 4;
  const ResidualFn F = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); };
  const Eigen::MatrixXd J = fd_jacobian(F, Eigen::VectorXd::Ones(3), 1e-6);
  EXPECT_LT((J - A).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Newton, ReportsSingularJacobian) {
  const ResidualFn F = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    r << x(0) + x(1) - 1.0, 2 * x(0) + 2 * x(1) - 3.0;
    return r;
  };
  const NewtonResult res = damped_newton(F, Eigen::VectorXd::Zero(2), NewtonOptions{});
  EXPECT_NE(res.status, NewtonStatus::Converged);
}

}  // namespace
