// SPDX-License-Identifier: Apache-2.0
#include "stabint/angle_grid.hpp"

#include <cmath>
#include <numbers>

#include "stabint/error.hpp"

namespace stabint {

using Complex = std::complex<double>;

AngleGrid::AngleGrid(std::size_t size) : size_(size) {
  if (size < 8 || (size & (size - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "grid size must be a power of two >= 8, got " + std::to_string(size));
  }
  const double two_pi = 2.0 * std::numbers::pi;
  auto nodes = std::make_shared<std::vector<double>>(size);
  auto roots = std::make_shared<std::vector<Complex>>(size);
  for (std::size_t m = 0; m < size; ++m) {
    const double t = two_pi * static_cast<double>(m) / static_cast<double>(size);
    (*nodes)[m] = -std::numbers::pi + t;
    (*roots)[m] = std::polar(1.0, -t);
  }
  nodes_ = std::move(nodes);
  roots_ = std::move(roots);
}

double AngleGrid::spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(size_); }

Complex AngleGrid::phase(long k, std::size_t m) const noexcept {
  // e^{-ik theta_m} = (-1)^k e^{-2 pi i k m / M}
  const auto M = static_cast<long>(size_);
  long idx = (k % M) * static_cast<long>(m) % M;
  if (idx < 0) idx += M;
  const Complex w = (*roots_)[static_cast<std::size_t>(idx)];
  return (k % 2 == 0) ? w : -w;
}

std::vector<Complex> AngleGrid::phase_table(int kmin, int kmax) const {
  std::vector<Complex> table(static_cast<std::size_t>(kmax - kmin + 1) * size_);
  for (int k = kmin; k <= kmax; ++k)
    for (std::size_t m = 0; m < size_; ++m) table[static_cast<std::size_t>(k - kmin) * size_ + m] = phase(k, m);
  return table;
}

namespace {

template <typename T>
TrigPolynomial fourier_impl(std::span<const T> values, const AngleGrid& grid, int K) {
  const std::size_t M = grid.size();
  if (values.size() != M) throw Error(ErrorCode::ShapeMismatch, "values do not match grid size");
  if (K < 0 || 2 * static_cast<std::size_t>(K) >= M) {
    throw Error(ErrorCode::GridTooCoarse, "Fourier window " + std::to_string(K) + " needs a grid finer than " +
                                              std::to_string(M));
  }
  TrigPolynomial out = TrigPolynomial::zero(-K, K);
  for (int k = -K; k <= K; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t m = 0; m < M; ++m) acc += values[m] * grid.phase(k, m);
    out[k] = acc / static_cast<double>(M);
  }
  if constexpr (std::is_same_v<T, double>) {
    for (int k = 1; k <= K; ++k) out[-k] = std::conj(out[k]);
    out[0] = Complex(out[0].real(), 0.0);
  }
  return out;
}

}  // namespace

TrigPolynomial fourier_coeffs(std::span<const Complex> values, const AngleGrid& grid, int K) {
  return fourier_impl(values, grid, K);
}

TrigPolynomial fourier_coeffs(std::span<const double> values, const AngleGrid& grid, int K) {
  return fourier_impl(values, grid, K);
}

std::vector<Complex> evaluate_on_grid(const TrigPolynomial& p, const AngleGrid& grid) {
  std::vector<Complex> out(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    Complex acc(0.0, 0.0);
    for (int k = p.lo(); k <= p.hi(); ++k) acc += p.coeff(k) * std::conj(grid.phase(k, m));
    out[m] = acc;
  }
  return out;
}

double grid_mean(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace stabint
