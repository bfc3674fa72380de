// SPDX-License-Identifier: Apache-2.0
#include "stabint/problem.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "detail.hpp"
#include "stabint/error.hpp"

namespace stabint {

using detail::Complex;

double ProblemSpec::tolerance() const noexcept { return options.newton_tol * (1.0 + weights.norm()); }

void ProblemSpec::validate() const {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (1, 2]");
  if (weights.rows() < 1 || weights.cols() < 1) throw Error(ErrorCode::ShapeMismatch, "weights must be T x (N+1)");
  if (!weights.allFinite()) throw Error(ErrorCode::NonFiniteValue, "weights must be finite");
  if (f.dim() != dim()) {
    throw Error(ErrorCode::ShapeMismatch, "density dimension " + std::to_string(f.dim()) +
                                              " does not match weight dimension " + std::to_string(dim()));
  }
  if (!(options.newton_tol > 0.0) || options.max_iterations < 1 || !(options.fd_step > 0.0))
    throw Error(ErrorCode::InvalidArgument, "solver options must be positive");
  if (options.fourier_window < horizon() + 1 || 2 * static_cast<std::size_t>(options.fourier_window) >= grid.size())
    throw Error(ErrorCode::InvalidArgument, "Fourier window must cover the horizon and stay below half the grid");
}

NewtonOptions newton_options(const ProblemSpec& problem) {
  NewtonOptions o;
  o.tol = problem.tolerance();
  o.max_iterations = problem.options.max_iterations;
  o.fd_step = problem.options.fd_step;
  o.cond_limit = problem.options.cond_limit;
  return o;
}

Eigen::MatrixXcd weights_on_grid(const Eigen::MatrixXcd& w, const AngleGrid& grid, int sign) {
  const auto M = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(M, w.rows());
  for (Eigen::Index m = 0; m < M; ++m)
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const Complex e = grid.phase(-sign * static_cast<long>(j), static_cast<std::size_t>(m));
      for (Eigen::Index t = 0; t < w.rows(); ++t) out(m, t) += w(t, j) * e;
    }
  return out;
}

std::vector<TrigPolynomial> fourier_window(const Eigen::MatrixXcd& values, const AngleGrid& grid, int K) {
  std::vector<TrigPolynomial> out;
  for (Eigen::Index t = 0; t < values.cols(); ++t) {
    const Eigen::VectorXcd col = values.col(t);
    out.push_back(fourier_coeffs(std::span<const Complex>(col.data(), static_cast<std::size_t>(col.size())), grid, K));
  }
  return out;
}

double orthogonality_defect(const ProblemSpec& problem, const Eigen::MatrixXcd& h_grid) {
  const AngleGrid& grid = problem.grid;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(grid.size());
  double worst = 0.0;
  for (int k = 0; k <= problem.horizon(); ++k)
    for (Eigen::Index t = 0; t < h_grid.cols(); ++t) {
      Complex acc(0.0, 0.0);
      for (std::size_t m = 0; m < grid.size(); ++m) acc += grid.phase(k, m) * h_grid(static_cast<Eigen::Index>(m), t);
      worst = std::max(worst, std::abs(acc * w));
    }
  return worst;
}

Eigen::VectorXd pack(const Eigen::MatrixXcd& c) {
  Eigen::VectorXd x(2 * c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    x(2 * i) = c.data()[i].real();
    x(2 * i + 1) = c.data()[i].imag();
  }
  return x;
}

Eigen::MatrixXcd unpack(const Eigen::VectorXd& x, int rows, int cols) {
  Eigen::MatrixXcd c(rows, cols);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = Complex(x(2 * i), x(2 * i + 1));
  return c;
}

namespace detail {

std::vector<Eigen::MatrixXcd> matrix_fourier(const std::vector<Eigen::MatrixXcd>& field, const AngleGrid& grid,
                                             int K) {
  const std::size_t M = grid.size();
  const auto T = field.front().rows();
  std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(2 * K + 1), Eigen::MatrixXcd::Zero(T, T));
  for (int k = -K; k <= K; ++k) {
    Eigen::MatrixXcd& acc = out[static_cast<std::size_t>(k + K)];
    for (std::size_t m = 0; m < M; ++m) acc += field[m] * grid.phase(k, m);
    acc /= static_cast<double>(M);
  }
  return out;
}

Eigen::MatrixXcd block_toeplitz(const std::vector<Eigen::MatrixXcd>& coeffs, int N) {
  const auto T = coeffs.front().rows();
  Eigen::MatrixXcd out((N + 1) * T, (N + 1) * T);
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j <= N; ++j) out.block(k * T, j * T, T, T) = coeffs[static_cast<std::size_t>(k - j + N)];
  return out;
}

Eigen::VectorXcd stack(const Eigen::MatrixXcd& w) {
  return Eigen::Map<const Eigen::VectorXcd>(w.data(), w.size());
}

Eigen::MatrixXcd unstack(const Eigen::VectorXcd& v, int T) {
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), T, v.size() / T);
}

double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

std::vector<Eigen::MatrixXcd> field_matrices(const DensityField& field) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(field.size());
  for (std::size_t m = 0; m < field.size(); ++m) out.emplace_back(field.at(m));
  return out;
}

}  // namespace detail
}  // namespace stabint
