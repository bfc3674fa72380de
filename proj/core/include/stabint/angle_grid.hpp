// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "stabint/trig_polynomial.hpp"

namespace stabint {

inline constexpr std::size_t kDefaultGridSize = 4096;

/// Uniform periodic grid theta_m = -pi + 2 pi m / M, M a power of two.
class AngleGrid {
 public:
  explicit AngleGrid(std::size_t size = kDefaultGridSize);

  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept;
  double node(std::size_t m) const noexcept { return (*nodes_)[m]; }
  const std::vector<double>& nodes() const noexcept { return *nodes_; }

  /// e^{-i k theta_m}
  std::complex<double> phase(long k, std::size_t m) const noexcept;

  /// Row k - kmin holds e^{-i k theta_m} for m = 0..M-1.
  std::vector<std::complex<double>> phase_table(int kmin, int kmax) const;

  bool operator==(const AngleGrid& other) const noexcept { return size_ == other.size_; }

 private:
  std::size_t size_;
  std::shared_ptr<const std::vector<double>> nodes_;
  std::shared_ptr<const std::vector<std::complex<double>>> roots_;  // e^{-2 pi i n / M}
};

/// r_k = (1/M) sum_m v_m e^{-i k theta_m}, k = -K..K.
TrigPolynomial fourier_coeffs(std::span<const std::complex<double>> values, const AngleGrid& grid, int K);
TrigPolynomial fourier_coeffs(std::span<const double> values, const AngleGrid& grid, int K);

/// Evaluates P at every node.
std::vector<std::complex<double>> evaluate_on_grid(const TrigPolynomial& p, const AngleGrid& grid);

/// (1/M) sum_m v_m, i.e. (1/2 pi) times the trapezoid integral.
double grid_mean(std::span<const double> values);

}  // namespace stabint
