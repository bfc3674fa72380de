// SPDX-License-Identifier: Apache-2.0
#include "stabint/density.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "stabint/error.hpp"

namespace stabint {

using Complex = std::complex<double>;

namespace {

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta + std::numbers::pi, two_pi);
  if (t < 0) t += two_pi;
  return t - std::numbers::pi;
}

/// Bracketing index and weight for periodic linear interpolation on sorted angles.
std::pair<std::size_t, double> locate(const std::vector<double>& angles, double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double t = wrap_angle(theta);
  const std::size_t n = angles.size();
  auto it = std::upper_bound(angles.begin(), angles.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - angles.begin());
  std::size_t lo;
  double a0, a1;
  if (hi == 0) {
    lo = n - 1;
    a0 = angles[lo] - two_pi;
    a1 = angles[0];
    hi = 0;
  } else if (hi == n) {
    lo = n - 1;
    a0 = angles[lo];
    a1 = angles[0] + two_pi;
    hi = 0;
  } else {
    lo = hi - 1;
    a0 = angles[lo];
    a1 = angles[hi];
  }
  const double w = (a1 > a0) ? (t - a0) / (a1 - a0) : 0.0;
  return {lo, w};
}

void check_sampled_angles(const std::vector<double>& angles, std::size_t nvalues) {
  if (angles.size() < 2 || angles.size() != nvalues) {
    throw Error(ErrorCode::ShapeMismatch, "sampled density needs matching angle/value lists of length >= 2");
  }
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!std::isfinite(angles[i]) || angles[i] < -std::numbers::pi || angles[i] >= std::numbers::pi) {
      throw Error(ErrorCode::InvalidArgument, "sampled angles must lie in [-pi, pi)");
    }
    if (i > 0 && !(angles[i] > angles[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sampled angles must be strictly increasing");
    }
  }
}

struct ScalarEval {
  double theta;
  double operator()(const ConstantDensity& d) const { return d.level; }
  double operator()(const PowTrigMagnitude& d) const { return std::pow(std::abs(d.base(theta)), d.exponent); }
  double operator()(const RationalAR& d) const {
    return d.scale / (2.0 * std::numbers::pi * std::norm(1.0 - d.pole * std::polar(1.0, theta)));
  }
  double operator()(const SampledDensity& d) const {
    const auto [lo, w] = locate(d.angles, theta);
    const std::size_t hi = (lo + 1) % d.angles.size();
    return (1.0 - w) * d.values[lo] + w * d.values[hi];
  }
};

void validate_scalar(const ScalarDensity& s) {
  if (const auto* c = std::get_if<ConstantDensity>(&s)) {
    if (!(c->level >= 0.0) || !std::isfinite(c->level))
      throw Error(ErrorCode::InvalidArgument, "constant density level must be finite and >= 0");
  } else if (const auto* p = std::get_if<PowTrigMagnitude>(&s)) {
    if (!std::isfinite(p->exponent)) throw Error(ErrorCode::InvalidArgument, "exponent must be finite");
  } else if (const auto* r = std::get_if<RationalAR>(&s)) {
    if (!(r->scale > 0.0) || !(std::abs(r->pole) < 1.0))
      throw Error(ErrorCode::InvalidArgument, "rational density needs scale > 0 and |pole| < 1");
  } else if (const auto* g = std::get_if<SampledDensity>(&s)) {
    check_sampled_angles(g->angles, g->values.size());
    for (double v : g->values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, "sampled density values must be finite and >= 0");
  }
}

}  // namespace

double evaluate(const ScalarDensity& density, double theta) { return std::visit(ScalarEval{theta}, density); }

SpectralDensity::SpectralDensity() : SpectralDensity(ScalarDensity(ConstantDensity{0.0})) {}

SpectralDensity::SpectralDensity(ScalarDensity scalar) {
  validate_scalar(scalar);
  terms_.push_back(DensityTerm{Eigen::MatrixXcd::Ones(1, 1), std::move(scalar)});
}

SpectralDensity SpectralDensity::constant(double level) { return SpectralDensity(ConstantDensity{level}); }

SpectralDensity SpectralDensity::structured(int dim, std::vector<DensityTerm> terms) {
  if (dim < 1 || terms.empty()) throw Error(ErrorCode::InvalidArgument, "structured density needs dim >= 1 and terms");
  for (const auto& t : terms) {
    if (t.weight.rows() != dim || t.weight.cols() != dim)
      throw Error(ErrorCode::ShapeMismatch, "density term weight must be " + std::to_string(dim) + "x" +
                                                std::to_string(dim));
    validate_scalar(t.shape);
    const double scale = std::max(1.0, t.weight.norm());
    if ((t.weight - t.weight.adjoint()).norm() > 1e-12 * scale)
      throw Error(ErrorCode::InvalidArgument, "density term weight must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.weight, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * scale)
      throw Error(ErrorCode::InvalidArgument, "density term weight must be positive semidefinite");
  }
  SpectralDensity out;
  out.dim_ = dim;
  out.terms_ = std::move(terms);
  return out;
}

SpectralDensity SpectralDensity::sampled_matrix(std::vector<double> angles, std::vector<Eigen::MatrixXcd> values) {
  check_sampled_angles(angles, values.size());
  const auto dim = values.front().rows();
  for (const auto& v : values)
    if (v.rows() != dim || v.cols() != dim) throw Error(ErrorCode::ShapeMismatch, "sampled matrices differ in shape");
  SpectralDensity out;
  out.dim_ = static_cast<int>(dim);
  out.terms_.clear();
  out.sample_angles_ = std::move(angles);
  out.samples_ = std::move(values);
  return out;
}

const ScalarDensity& SpectralDensity::scalar_shape() const {
  if (!is_scalar()) throw Error(ErrorCode::InvalidArgument, "density is not a plain scalar density");
  return terms_.front().shape;
}

Eigen::MatrixXcd SpectralDensity::at(double theta) const {
  if (!samples_.empty()) {
    const auto [lo, w] = locate(sample_angles_, theta);
    const std::size_t hi = (lo + 1) % sample_angles_.size();
    return (1.0 - w) * samples_[lo] + w * samples_[hi];
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& t : terms_) out += t.weight * evaluate(t.shape, theta);
  return out;
}

DensityField SpectralDensity::eval(const AngleGrid& grid) const {
  const std::size_t M = grid.size();
  const auto T = static_cast<std::size_t>(dim_);
  std::vector<Complex> data(M * T * T);
  for (std::size_t m = 0; m < M; ++m) {
    const Eigen::MatrixXcd v = at(grid.node(m));
    if (!v.allFinite()) {
      throw Error(ErrorCode::NonFiniteValue, "density is not finite at node " + std::to_string(m) +
                                                 " (theta = " + format_value(grid.node(m)) + ")");
    }
    std::copy(v.data(), v.data() + T * T, data.begin() + static_cast<std::ptrdiff_t>(m * T * T));
  }
  return DensityField(dim_, grid, std::move(data));
}

SpectralDensity SpectralDensity::scaled(double s) const {
  if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "density scale must be >= 0");
  SpectralDensity out = *this;
  for (auto& t : out.terms_) t.weight *= s;
  for (auto& v : out.samples_) v *= s;
  return out;
}

DensityField::DensityField(int dim, AngleGrid grid, std::vector<Complex> data)
    : dim_(dim), grid_(std::move(grid)), data_(std::move(data)) {
  if (data_.size() != grid_.size() * static_cast<std::size_t>(dim_ * dim_))
    throw Error(ErrorCode::ShapeMismatch, "density field data does not match grid and dimension");
}

Eigen::Map<const Eigen::MatrixXcd> DensityField::at(std::size_t m) const {
  const auto T = static_cast<std::size_t>(dim_);
  return Eigen::Map<const Eigen::MatrixXcd>(data_.data() + m * T * T, dim_, dim_);
}

std::vector<double> DensityField::scalar_values() const {
  if (dim_ != 1) throw Error(ErrorCode::ShapeMismatch, "scalar values requested from a matrix density");
  std::vector<double> out(data_.size());
  for (std::size_t m = 0; m < data_.size(); ++m) out[m] = data_[m].real();
  return out;
}

std::pair<double, double> DensityField::eigen_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < size(); ++m) {
    if (dim_ == 1) {
      lo = std::min(lo, scalar(m));
      hi = std::max(hi, scalar(m));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(at(m)), Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return {lo, hi};
}

void DensityField::check_hermitian_psd() const {
  for (std::size_t m = 0; m < size(); ++m) {
    const Eigen::MatrixXcd F = at(m);
    const double n = F.norm();
    if ((F - F.adjoint()).norm() > 1e-12 * n)
      throw Error(ErrorCode::InvalidArgument, "density is not Hermitian at node " + std::to_string(m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(0.0, es.eigenvalues().maxCoeff()))
      throw Error(ErrorCode::InvalidArgument, "density is not positive semidefinite at node " + std::to_string(m));
  }
}

void require_positive(const DensityField& field, double floor) {
  const auto [lo, hi] = field.eigen_range();
  if (!(hi > 0.0) || lo < floor * hi) {
    throw Error(ErrorCode::DensityVanishes, "density minimum " + format_value(lo) + " is below " +
                                                format_value(floor) + " x maximum " + format_value(hi));
  }
}

Eigen::MatrixXcd hermitian_power(const Eigen::MatrixXcd& m, double p) {
  if (m.rows() == 1) return Eigen::MatrixXcd::Constant(1, 1, std::pow(std::max(m(0, 0).real(), 0.0), p));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::pow(std::max(ev(i), 0.0), p);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

TrigPolynomial neg_power_coeffs(const SpectralDensity& f, double p, int K, const AngleGrid& grid, double alias_tol) {
  if (f.dim() != 1) throw Error(ErrorCode::ShapeMismatch, "negative power coefficients need a scalar density");
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "power must be > 0");
  auto coeffs_on = [&](const AngleGrid& g) {
    const DensityField field = f.eval(g);
    require_positive(field);
    std::vector<double> v = field.scalar_values();
    for (auto& x : v) x = std::pow(x, -p);
    return fourier_coeffs(std::span<const double>(v), g, K);
  };
  TrigPolynomial r = coeffs_on(grid);
  const TrigPolynomial fine = coeffs_on(AngleGrid(grid.size() * 2));
  const double scale = std::max(r.max_abs_coeff(), 1e-300);
  for (int k = -K; k <= K; ++k) {
    if (std::abs(fine.coeff(k) - r.coeff(k)) > alias_tol * scale) {
      throw Error(ErrorCode::GridTooCoarse, "coefficient " + std::to_string(k) + " changes by " +
                                                format_value(std::abs(fine.coeff(k) - r.coeff(k))) +
                                                " under grid doubling");
    }
  }
  return r;
}

MinimalityReport check_minimality(const SpectralDensity& f, const SpectralDensity* g, double alpha,
                                  const AngleGrid& grid) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (1, 2]");
  const double p = 1.0 / (alpha - 1.0);
  const std::size_t top = std::max<std::size_t>(grid.size(), 512);
  MinimalityReport report;
  int growth_run = 0;
  for (std::size_t M = 64; M <= top; M *= 2) {
    double sum = 0.0;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(M);
    for (std::size_t m = 0; m < M; ++m) {
      const double theta = -std::numbers::pi + h * (static_cast<double>(m) + 0.5);
      Eigen::MatrixXcd F = f.at(theta);
      if (g != nullptr) F += g->at(theta);
      double tr = 0.0;
      if (F.rows() == 1) {
        tr = std::pow(F(0, 0).real(), -p);
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr += std::pow(es.eigenvalues()(i), -p);
      }
      if (!std::isfinite(tr) || tr < 0.0) {
        report.finite = false;
        report.value = std::numeric_limits<double>::infinity();
        return report;
      }
      sum += tr * h;
    }
    if (!report.sequence.empty()) {
      growth_run = (sum > 1.1 * report.sequence.back()) ? growth_run + 1 : 0;
    }
    report.sequence.push_back(sum);
    report.value = sum;
    if (growth_run >= 2) {
      report.finite = false;
      return report;
    }
  }
  return report;
}

}  // namespace stabint
