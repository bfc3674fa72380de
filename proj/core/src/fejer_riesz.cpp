// SPDX-License-Identifier: Apache-2.0
#include "stabint/fejer_riesz.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "stabint/error.hpp"
#include "stabint/newton.hpp"

namespace stabint {

using Complex = std::complex<double>;

TrigPolynomial causal_power(const std::vector<Complex>& gamma) {
  if (gamma.empty()) throw Error(ErrorCode::InvalidArgument, "causal_power needs at least one coefficient");
  const int n = static_cast<int>(gamma.size()) - 1;
  // sum_k gamma_k e^{-ik theta} has coefficient gamma_k at e^{i(-k) theta}.
  TrigPolynomial causal(-n, std::vector<Complex>(gamma.rbegin(), gamma.rend()));
  return causal * causal.conj_reflect();
}

namespace {

double reconstruction_error(const TrigPolynomial& p, const std::vector<Complex>& gamma, int degree) {
  const TrigPolynomial back = causal_power(gamma);
  double err = 0.0;
  for (int k = -degree; k <= degree; ++k) err = std::max(err, std::abs(back.coeff(k) - p.coeff(k)));
  return err;
}

std::vector<Complex> polish(const TrigPolynomial& p, std::vector<Complex> gamma, int n) {
  // Unknowns: gamma_0 (real), Re/Im gamma_1..n. Equations: r_0 (real), Re/Im r_1..n.
  auto pack = [n](const std::vector<Complex>& g) {
    Eigen::VectorXd x(2 * n + 1);
    x(0) = g[0].real();
    for (int k = 1; k <= n; ++k) {
      x(2 * k - 1) = g[static_cast<std::size_t>(k)].real();
      x(2 * k) = g[static_cast<std::size_t>(k)].imag();
    }
    return x;
  };
  auto unpack = [n](const Eigen::VectorXd& x) {
    std::vector<Complex> g(static_cast<std::size_t>(n + 1));
    g[0] = x(0);
    for (int k = 1; k <= n; ++k) g[static_cast<std::size_t>(k)] = Complex(x(2 * k - 1), x(2 * k));
    return g;
  };
  auto residual = [&](const Eigen::VectorXd& x) {
    const TrigPolynomial back = causal_power(unpack(x));
    Eigen::VectorXd e(2 * n + 1);
    e(0) = (back.coeff(0) - p.coeff(0)).real();
    for (int k = 1; k <= n; ++k) {
      const Complex d = back.coeff(k) - p.coeff(k);
      e(2 * k - 1) = d.real();
      e(2 * k) = d.imag();
    }
    return e;
  };
  NewtonOptions opts;
  opts.tol = 1e-15 * p.max_abs_coeff();
  opts.max_iterations = 20;
  const NewtonResult res = damped_newton(residual, pack(gamma), opts);
  if (!res.x.allFinite() || res.residual_norm > residual(pack(gamma)).norm()) return gamma;
  return unpack(res.x);
}

}  // namespace

std::vector<Complex> fejer_riesz(const TrigPolynomial& p, double tol) {
  const double scale = p.max_abs_coeff();
  const int top = std::max(std::abs(p.lo()), std::abs(p.hi()));
  for (int k = 0; k <= top; ++k) {
    if (std::abs(p.coeff(-k) - std::conj(p.coeff(k))) > 1e-12 * std::max(scale, 1e-300))
      throw Error(ErrorCode::InvalidArgument, "fejer_riesz input is not real-valued (coefficients not Hermitian)");
  }
  if (scale == 0.0) return {Complex(0.0, 0.0)};
  if (p.coeff(0).real() <= 0.0) throw Error(ErrorCode::NotFactorizable, "fejer_riesz input has nonpositive mean");

  int degree = top;
  while (degree > 0 && std::abs(p.coeff(degree)) <= 1e-14 * scale) --degree;

  std::vector<Complex> gamma(static_cast<std::size_t>(degree + 1));
  if (degree == 0) {
    gamma[0] = std::sqrt(p.coeff(0).real());
  } else {
    // Companion matrix of z^degree * p(z) (monic after dividing by r_degree).
    const int d2 = 2 * degree;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d2, d2);
    const Complex lead = p.coeff(degree);
    for (int i = 0; i < d2; ++i) companion(0, i) = -p.coeff(degree - 1 - i) / lead;
    for (int i = 1; i < d2; ++i) companion(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NotFactorizable, "root finding failed");
    std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + d2);
    // Roots pair up as (rho, 1/conj(rho)); unit-circle roots come doubled, so the smaller half is the
    // inside set with unit-circle roots at half multiplicity.
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    std::vector<Complex> u{Complex(1.0, 0.0)};  // prod (1 - rho w)
    for (int i = 0; i < degree; ++i) {
      const Complex rho = roots[static_cast<std::size_t>(i)];
      std::vector<Complex> next(u.size() + 1, Complex(0.0, 0.0));
      for (std::size_t k = 0; k < u.size(); ++k) {
        next[k] += u[k];
        next[k + 1] -= rho * u[k];
      }
      u = std::move(next);
    }
    double energy = 0.0;
    for (const auto& v : u) energy += std::norm(v);
    const double s = std::sqrt(p.coeff(0).real() / energy);
    for (std::size_t k = 0; k < u.size(); ++k) gamma[k] = s * u[k];
    gamma = polish(p, gamma, degree);
    if (gamma[0].real() < 0.0)
      for (auto& g : gamma) g = -g;
  }
  gamma.resize(static_cast<std::size_t>(top + 1), Complex(0.0, 0.0));

  const double err = reconstruction_error(p, gamma, top);
  if (!(err <= tol * scale))
    throw Error(ErrorCode::NotFactorizable,
                "reconstruction error " + format_value(err / scale) + " exceeds tolerance (input negative somewhere?)");
  return gamma;
}

}  // namespace stabint
