// SPDX-License-Identifier: Apache-2.0
#include "stabint/newton.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace stabint {

Eigen::MatrixXd fd_jacobian(const ResidualFn& F, const Eigen::VectorXd& x, double fd_step) {
  Eigen::MatrixXd J;
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    const Eigen::VectorXd fp = F(xp);
    xp(i) = x(i) - h;
    const Eigen::VectorXd fm = F(xp);
    xp(i) = x(i);
    if (J.size() == 0) J.resize(fp.size(), x.size());
    J.col(i) = (fp - fm) / (2.0 * h);
  }
  return J;
}

NewtonResult damped_newton(const ResidualFn& F, Eigen::VectorXd x0, const NewtonOptions& options,
                           const JacobianFn& jacobian) {
  NewtonResult result;
  result.x = std::move(x0);
  Eigen::VectorXd fx = F(result.x);
  double norm = fx.norm();
  for (int it = 0;; ++it) {
    result.iterations = it;
    result.residual_norm = norm;
    if (!std::isfinite(norm)) {
      result.status = NewtonStatus::NonFinite;
      return result;
    }
    if (norm <= options.tol) {
      result.status = NewtonStatus::Converged;
      return result;
    }
    if (it >= options.max_iterations) {
      result.status = NewtonStatus::MaxIterations;
      return result;
    }
    const Eigen::MatrixXd J = jacobian ? jacobian(result.x, fx) : fd_jacobian(F, result.x, options.fd_step);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    result.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(smax > 0.0) || result.condition > options.cond_limit) {
      result.status = NewtonStatus::Singular;
      return result;
    }
    const Eigen::VectorXd step = -svd.solve(fx);
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b < options.max_backtracks; ++b, t *= 0.5) {
      const Eigen::VectorXd trial = result.x + t * step;
      const Eigen::VectorXd ft = F(trial);
      const double nt = ft.norm();
      if (std::isfinite(nt) && nt * nt <= (1.0 - 2.0 * options.armijo * t) * norm * norm) {
        if (nt >= norm * (1.0 - 1e-12)) break;  // rounding-level progress only
        result.x = trial;
        fx = ft;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.status = NewtonStatus::Stalled;
      return result;
    }
  }
}

}  // namespace stabint
