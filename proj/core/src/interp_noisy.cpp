// SPDX-License-Identifier: Apache-2.0
#include "stabint/interp_noisy.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "detail.hpp"
#include "stabint/interp_noiseless.hpp"
#include "stabint/spow.hpp"

namespace stabint {

using detail::Complex;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool negligible(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& f) {
  return g.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, f.cwiseAbs().maxCoeff());
}

/// Real 2x2 Jacobian of spow(x, q) with respect to (Re x, Im x), returned as d/dRe and d/dIm.
std::pair<Complex, Complex> spow_jacobian(Complex x, double q) {
  const double r = std::abs(x);
  if (r == 0.0) {
    const double d = q > 1.0 ? 0.0 : (q == 1.0 ? 1.0 : 1e300);
    return {Complex(d, 0.0), Complex(0.0, -d)};
  }
  const double u = x.real();
  const double w = x.imag();
  const double rq1 = std::pow(r, q - 1.0);
  const double rq3 = (q - 1.0) * rq1 / (r * r);
  const Complex xb = std::conj(x);
  return {rq3 * u * xb + rq1, rq3 * w * xb - Complex(0.0, rq1)};
}

/// Gradient of the scalar objective as a complex number (d/dRe + i d/dIm).
Complex scalar_gradient(double f, double g, Complex A, Complex C, Complex h, double alpha) {
  const Exponent q(alpha - 1.0);
  return -f * std::conj(spow(A - h, q)) + g * std::conj(spow(h, q)) + std::conj(C);
}

/// Newton on the pointwise equation in u = spow(x, q), where x is h (near_zero_h) or A - h.
/// Smooth in u where x itself is small, unlike the formulation in h.
Complex polish_scalar(double f, double g, Complex A, Complex C, double alpha, Complex h, bool near_zero_h) {
  const double q = alpha - 1.0;
  const Exponent eq(q);
  const Exponent inv(1.0 / q);
  // near_zero_h: E(u) = f spow(A - spow(u, 1/q), q) - g u - C
  // otherwise:   E(w) = f w - g spow(A - spow(w, 1/q), q) - C
  const double fa = near_zero_h ? f : g;
  const double fb = near_zero_h ? g : f;
  const double sign = near_zero_h ? 1.0 : -1.0;
  auto E = [&](Complex u) { return sign * (fa * spow(A - spow(u, inv), eq) - fb * u) - C; };
  Complex u = spow(near_zero_h ? h : A - h, eq);
  Complex e = E(u);
  for (int it = 0; it < 30; ++it) {
    // chain rule through x = spow(u, 1/q), y = A - x, s = spow(y, q)
    const Complex x = spow(u, inv);
    const auto [xr, xi] = spow_jacobian(u, 1.0 / q);
    const auto [sr, si] = spow_jacobian(A - x, q);
    auto ds = [&](Complex dx) { return -(sr * dx.real() + si * dx.imag()); };
    const Complex dre = sign * (fa * ds(xr) - fb);
    const Complex dim = sign * (fa * ds(xi) - fb * Complex(0.0, 1.0));
    Eigen::Matrix2d J;
    J << dre.real(), dim.real(), dre.imag(), dim.imag();
    const Eigen::Vector2d step = -J.fullPivLu().solve(Eigen::Vector2d(e.real(), e.imag()));
    if (!step.allFinite()) break;
    const Complex d(step(0), step(1));
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b < 40; ++b, t *= 0.5) {
      const Complex et = E(u + t * d);
      if (std::abs(et) < std::abs(e)) {
        u += t * d;
        e = et;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const Complex x = spow(u, inv);
  return near_zero_h ? x : A - x;
}

Complex scalar_pointwise(double f, double g, Complex A, Complex C, double alpha, const PointwiseOptions& opt,
                         Complex h) {
  const double q = alpha - 1.0;
  const Exponent eq(q);
  auto defect = [&](Complex x) { return std::abs(f * spow(A - x, eq) - g * spow(x, eq) - C); };
  auto done = [&](Complex x, double factor) {
    const double scale = f * std::pow(std::abs(A - x), q) + g * std::pow(std::abs(x), q) + std::abs(C);
    return defect(x) <= factor * opt.tol * scale;
  };
  if (done(h, 1.0)) return h;
  // The root is unique, so any converged root-finder is the answer.
  const bool h_small = std::abs(h) <= std::abs(A - h);
  for (bool variable : {h_small, !h_small}) {
    const Complex p = polish_scalar(f, g, A, C, alpha, h, variable);
    if (done(p, 1.0)) return p;
  }
  // Globally convergent fallback: Newton directions with exact line search on the convex objective.
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Complex grad = scalar_gradient(f, g, A, C, h, alpha);
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    auto add = [&](double wgt, Complex x) {
      const double r = std::abs(x);
      if (wgt == 0.0 || r == 0.0) return;
      Eigen::Vector2d u(x.real() / r, x.imag() / r);
      H += wgt * std::pow(r, alpha - 2.0) * (Eigen::Matrix2d::Identity() + (alpha - 2.0) * u * u.transpose());
    };
    add(f, A - h);
    add(g, h);
    Eigen::Vector2d step = -H.ldlt().solve(Eigen::Vector2d(grad.real(), grad.imag()));
    if (!step.allFinite() || step.norm() == 0.0) step = -Eigen::Vector2d(grad.real(), grad.imag());
    const Complex d(step(0), step(1));
    auto slope = [&](double t) {
      const Complex gr = scalar_gradient(f, g, A, C, h + t * d, alpha);
      return gr.real() * d.real() + gr.imag() * d.imag();
    };
    double lo = 0.0;
    double hi = 1.0;
    while (slope(hi) < 0.0 && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
    for (int b = 0; b < 80 && hi - lo > 1e-15 * hi; ++b) {
      const double mid = 0.5 * (lo + hi);
      (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const Complex next = h + 0.5 * (lo + hi) * d;
    const bool stalled = std::abs(next - h) <= 1e-15 * (std::abs(h) + std::abs(A));
    h = next;
    if (done(h, 1.0)) return h;
    if (stalled || it % 4 == 3) {
      const Complex p = polish_scalar(f, g, A, C, alpha, h, std::abs(h) <= std::abs(A - h));
      if (done(p, 1.0)) return p;
      if (defect(p) < defect(h)) h = p;
      if (stalled) break;
    }
  }
  if (done(h, 1e3)) return h;
  throw Error(ErrorCode::NoConvergencePointwise, "scalar pointwise solve did not converge");
}

Eigen::VectorXcd closed_form_alpha2(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& G, const Eigen::VectorXcd& A,
                                    const Eigen::VectorXcd& C) {
  const Eigen::MatrixXcd S = (F + G).conjugate();
  return S.fullPivLu().solve(F.conjugate() * A - C.conjugate());
}

Eigen::VectorXcd equation(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& G, const Eigen::VectorXcd& A,
                          const Eigen::VectorXcd& C, const Eigen::VectorXcd& h, double q) {
  const Exponent e(q);
  return F * spow_vec(Eigen::VectorXcd(A - h), e) - G * spow_vec(h, e) - C;
}

/// Newton with per-component variables z_s = spow(h_s, q) (small_h[s]) or spow(A_s - h_s, q).
Eigen::VectorXcd vector_newton(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& G, const Eigen::VectorXcd& A,
                               const Eigen::VectorXcd& C, double alpha, const PointwiseOptions& opt,
                               const Eigen::VectorXcd& h0, bool* ok) {
  const double q = alpha - 1.0;
  const Exponent eq(q);
  const Exponent inv(1.0 / q);
  const auto T = h0.size();
  std::vector<bool> small_h(static_cast<std::size_t>(T));
  Eigen::VectorXcd z(T);
  for (Eigen::Index s = 0; s < T; ++s) {
    small_h[static_cast<std::size_t>(s)] = std::abs(h0(s)) <= std::abs(A(s) - h0(s));
    z(s) = spow(small_h[static_cast<std::size_t>(s)] ? h0(s) : A(s) - h0(s), eq);
  }
  auto h_of = [&](const Eigen::VectorXcd& zz) {
    Eigen::VectorXcd h(T);
    for (Eigen::Index s = 0; s < T; ++s) {
      const Complex x = spow(zz(s), inv);
      h(s) = small_h[static_cast<std::size_t>(s)] ? x : A(s) - x;
    }
    return h;
  };
  auto scale_of = [&](const Eigen::VectorXcd& h) {
    return F.norm() * spow_vec(Eigen::VectorXcd(A - h), eq).norm() + G.norm() * spow_vec(h, eq).norm() + C.norm();
  };
  Eigen::VectorXcd h = h_of(z);
  Eigen::VectorXcd E = equation(F, G, A, C, h, q);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double scale = scale_of(h);
    if (E.norm() <= opt.tol * scale || scale == 0.0) {
      *ok = true;
      return h;
    }
    Eigen::MatrixXd J(2 * T, 2 * T);
    for (Eigen::Index s = 0; s < T; ++s) {
      const auto [xr, xi] = spow_jacobian(z(s), 1.0 / q);
      Complex d1[2], d2[2];  // derivatives of spow(A_s - h_s, q) and spow(h_s, q) along Re z_s, Im z_s
      if (small_h[static_cast<std::size_t>(s)]) {
        const auto [sr, si] = spow_jacobian(A(s) - h(s), q);
        d1[0] = -(sr * xr.real() + si * xr.imag());
        d1[1] = -(sr * xi.real() + si * xi.imag());
        d2[0] = Complex(1.0, 0.0);
        d2[1] = Complex(0.0, 1.0);
      } else {
        const auto [sr, si] = spow_jacobian(h(s), q);
        d1[0] = Complex(1.0, 0.0);
        d1[1] = Complex(0.0, 1.0);
        d2[0] = -(sr * xr.real() + si * xr.imag());
        d2[1] = -(sr * xi.real() + si * xi.imag());
      }
      for (int part = 0; part < 2; ++part) {
        const Eigen::VectorXcd col = F.col(s) * d1[part] - G.col(s) * d2[part];
        for (Eigen::Index r = 0; r < T; ++r) {
          J(2 * r, 2 * s + part) = col(r).real();
          J(2 * r + 1, 2 * s + part) = col(r).imag();
        }
      }
    }
    Eigen::VectorXd e(2 * T);
    for (Eigen::Index r = 0; r < T; ++r) {
      e(2 * r) = E(r).real();
      e(2 * r + 1) = E(r).imag();
    }
    const Eigen::VectorXd step = -J.fullPivLu().solve(e);
    if (!step.allFinite()) break;
    Eigen::VectorXcd d(T);
    for (Eigen::Index r = 0; r < T; ++r) d(r) = Complex(step(2 * r), step(2 * r + 1));
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b < 60; ++b, t *= 0.5) {
      const Eigen::VectorXcd zt = z + t * d;
      const Eigen::VectorXcd ht = h_of(zt);
      const Eigen::VectorXcd Et = equation(F, G, A, C, ht, q);
      if (Et.norm() <= (1.0 - 1e-4 * t) * E.norm()) {
        z = zt;
        h = ht;
        E = Et;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  *ok = E.norm() <= 1e3 * opt.tol * scale_of(h);
  return h;
}

}  // namespace

Eigen::VectorXcd pointwise_h(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& G, const Eigen::VectorXcd& A,
                             const Eigen::VectorXcd& C, double alpha, const PointwiseOptions& options,
                             const Eigen::VectorXcd* warm) {
  const auto T = A.size();
  if (F.rows() != T || G.rows() != T || C.size() != T) throw Error(ErrorCode::ShapeMismatch, "pointwise shapes differ");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (1, 2]");
  const Eigen::MatrixXcd S = F + G;
  if (detail::condition_number(S) > 1e14) throw Error(ErrorCode::DegenerateNode, "f + g is singular");
  if (negligible(G, F)) {
    const Eigen::VectorXcd y = F.fullPivLu().solve(C);
    return A - spow_vec(y, Exponent(1.0 / (alpha - 1.0)));
  }
  const Eigen::VectorXcd start = closed_form_alpha2(F, G, A, C);
  if (alpha == 2.0) return start;
  if (T == 1) {
    const Complex h0 = warm != nullptr ? (*warm)(0) : start(0);
    return Eigen::VectorXcd::Constant(
        1, scalar_pointwise(F(0, 0).real(), G(0, 0).real(), A(0), C(0), alpha, options, h0));
  }
  bool ok = false;
  Eigen::VectorXcd h = vector_newton(F, G, A, C, alpha, options, warm != nullptr ? *warm : start, &ok);
  if (ok) return h;
  h = vector_newton(F, G, A, C, alpha, options, h, &ok);
  if (ok) return h;
  h = start;
  for (double a = 2.0; a > alpha;) {
    a = std::max(alpha, a - 0.1);
    h = vector_newton(F, G, A, C, a, options, h, &ok);
    if (!ok) break;
  }
  if (ok) return h;
  throw Error(ErrorCode::NoConvergencePointwise, "vector pointwise solve did not converge");
}

namespace {

class NoisyKernel {
 public:
  explicit NoisyKernel(const NoisyProblemSpec& problem, std::optional<double> alpha_override = std::nullopt)
      : T_(problem.dim()),
        N_(problem.horizon()),
        M_(problem.grid.size()),
        alpha_(alpha_override.value_or(problem.alpha)),
        weights_(problem.weights),
        F_(detail::field_matrices(problem.f.eval(problem.grid))),
        G_(detail::field_matrices(problem.g.eval(problem.grid))),
        A_(weights_on_grid(problem.weights, problem.grid, +1)),
        phase_(problem.grid.phase_table(0, N_)) {
    for (std::size_t m = 0; m < M_; ++m) {
      if (detail::condition_number(F_[m] + G_[m]) > 1e14)
        throw Error(ErrorCode::DegenerateNode, "f + g is singular at node " + std::to_string(m));
    }
  }

  Eigen::MatrixXcd characteristic(const Eigen::MatrixXcd& c) const {
    Eigen::MatrixXcd h(static_cast<Eigen::Index>(M_), T_);
    for (std::size_t m = 0; m < M_; ++m) {
      Eigen::VectorXcd C = Eigen::VectorXcd::Zero(T_);
      for (int j = 0; j <= N_; ++j) C += c.col(j) * phase_[static_cast<std::size_t>(j) * M_ + m];
      const auto mi = static_cast<Eigen::Index>(m);
      try {
        h.row(mi) = pointwise_h(F_[m], G_[m], A_.row(mi).transpose(), C, alpha_).transpose();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergencePointwise) throw;
        throw Error(ErrorCode::NoConvergencePointwise, "node " + std::to_string(m));
      }
    }
    return h;
  }

  Eigen::MatrixXcd residual(const Eigen::MatrixXcd& c) const {
    const Eigen::MatrixXcd h = characteristic(c);
    Eigen::MatrixXcd R(T_, N_ + 1);
    for (int k = 0; k <= N_; ++k) {
      const Complex* ph = phase_.data() + static_cast<std::size_t>(k) * M_;
      for (int t = 0; t < T_; ++t) {
        Complex acc(0.0, 0.0);
        for (std::size_t m = 0; m < M_; ++m) acc += ph[m] * h(static_cast<Eigen::Index>(m), t);
        R(t, k) = kTwoPi * acc / static_cast<double>(M_);
      }
    }
    return R;
  }

  const std::vector<Eigen::MatrixXcd>& F() const { return F_; }
  const std::vector<Eigen::MatrixXcd>& G() const { return G_; }

 private:
  int T_;
  int N_;
  std::size_t M_;
  double alpha_;
  Eigen::MatrixXcd weights_;
  std::vector<Eigen::MatrixXcd> F_;
  std::vector<Eigen::MatrixXcd> G_;
  Eigen::MatrixXcd A_;
  std::vector<Complex> phase_;
};

void validate_noisy(const NoisyProblemSpec& problem) {
  problem.validate();
  if (problem.g.dim() != problem.dim()) throw Error(ErrorCode::ShapeMismatch, "noise density dimension mismatch");
}

/// alpha = 2 noisy coefficients for the field pair (F^p, G^p), then a signed-power map to alpha.
Eigen::MatrixXcd noisy_initial_guess(const NoisyProblemSpec& problem, const NoisyKernel& kernel) {
  const double p = 1.0 / (problem.alpha - 1.0);
  const int N = problem.horizon();
  std::vector<Eigen::MatrixXcd> b_field, d_field;
  for (std::size_t m = 0; m < problem.grid.size(); ++m) {
    const Eigen::MatrixXcd Fp = hermitian_power(kernel.F()[m], p);
    const Eigen::MatrixXcd Gp = hermitian_power(kernel.G()[m], p);
    const Eigen::MatrixXcd Sinv = (Fp + Gp).inverse();
    b_field.push_back(Sinv.transpose());
    d_field.push_back((Fp * Sinv).transpose());
  }
  const Eigen::MatrixXcd B = detail::block_toeplitz(detail::matrix_fourier(b_field, problem.grid, N), N);
  const Eigen::MatrixXcd D = detail::block_toeplitz(detail::matrix_fourier(d_field, problem.grid, N), N);
  const Eigen::VectorXcd x = B.fullPivLu().solve(D * detail::stack(problem.weights));
  const Eigen::MatrixXcd d = detail::unstack(x, problem.dim()).conjugate();
  if (problem.alpha == 2.0) return d;
  const Eigen::MatrixXcd Dg = weights_on_grid(d, problem.grid, -1);
  Eigen::MatrixXcd Cg(Dg.rows(), Dg.cols());
  for (Eigen::Index i = 0; i < Dg.size(); ++i) {
    const double r = std::abs(Dg.data()[i]);
    Cg.data()[i] = r > 0.0 ? std::pow(r, problem.alpha - 2.0) * Dg.data()[i] : Complex(0.0, 0.0);
  }
  Eigen::MatrixXcd c(problem.dim(), N + 1);
  for (int j = 0; j <= N; ++j)
    for (int t = 0; t < problem.dim(); ++t) {
      Complex acc(0.0, 0.0);
      for (std::size_t m = 0; m < problem.grid.size(); ++m)
        acc += Cg(static_cast<Eigen::Index>(m), t) * std::conj(problem.grid.phase(j, m));
      c(t, j) = acc / static_cast<double>(problem.grid.size());
    }
  return c;
}

NewtonResult run_newton(const NoisyKernel& kernel, const NoisyProblemSpec& problem, const Eigen::MatrixXcd& c0) {
  const int T = problem.dim();
  const int cols = problem.horizon() + 1;
  auto F = [&](const Eigen::VectorXd& x) {
    try {
      return pack(kernel.residual(unpack(x, T, cols)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergencePointwise) throw;
      return Eigen::VectorXd::Constant(2 * T * cols, std::numeric_limits<double>::quiet_NaN()).eval();
    }
  };
  return damped_newton(F, pack(c0), newton_options(problem));
}

}  // namespace

Eigen::MatrixXcd characteristic_noisy(const NoisyProblemSpec& problem, const Eigen::MatrixXcd& c) {
  validate_noisy(problem);
  return NoisyKernel(problem).characteristic(c);
}

Eigen::MatrixXcd residual_noisy(const NoisyProblemSpec& problem, const Eigen::MatrixXcd& c) {
  validate_noisy(problem);
  return NoisyKernel(problem).residual(c);
}

double error_norm_noisy(const NoisyProblemSpec& problem, const Eigen::MatrixXcd& h_grid) {
  validate_noisy(problem);
  const DensityField F = problem.f.eval(problem.grid);
  const DensityField G = problem.g.eval(problem.grid);
  const Eigen::MatrixXcd A = weights_on_grid(problem.weights, problem.grid, +1);
  const Exponent q(problem.alpha - 1.0);
  double acc = 0.0;
  for (std::size_t m = 0; m < F.size(); ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    const Eigen::VectorXcd h = h_grid.row(mi).transpose();
    const Eigen::VectorXcd v = A.row(mi).transpose() - h;
    acc += (v.transpose() * (F.at(m) * spow_vec(v, q))).value().real();
    acc += (h.transpose() * (G.at(m) * spow_vec(h, q))).value().real();
  }
  return std::max(0.0, acc * problem.grid.spacing());
}

double pointwise_equation_defect(const NoisyProblemSpec& problem, const Solution& s) {
  const DensityField F = problem.f.eval(problem.grid);
  const DensityField G = problem.g.eval(problem.grid);
  const Eigen::MatrixXcd A = weights_on_grid(problem.weights, problem.grid, +1);
  const Eigen::MatrixXcd C = weights_on_grid(s.c, problem.grid, -1);
  const Exponent q(problem.alpha - 1.0);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t m = 0; m < F.size(); ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    const Eigen::VectorXcd h = s.h_grid.row(mi).transpose();
    const Eigen::VectorXcd sv = spow_vec(Eigen::VectorXcd(A.row(mi).transpose() - h), q);
    const Eigen::VectorXcd sh = spow_vec(h, q);
    const Eigen::VectorXcd lhs = F.at(m) * sv - G.at(m) * sh;
    worst = std::max(worst, (lhs - C.row(mi).transpose()).norm());
    scale = std::max(scale, F.at(m).norm() * sv.norm() + G.at(m).norm() * sh.norm() + C.row(mi).norm());
  }
  return scale > 0.0 ? worst / scale : worst;
}

Solution solve_coefficients_noisy(const NoisyProblemSpec& problem) {
  validate_noisy(problem);
  const NoisyKernel kernel(problem);
  const int T = problem.dim();
  const int cols = problem.horizon() + 1;
  Diagnostics diag;
  diag.method = "newton";
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(T, cols);
  if (problem.weights.norm() > 0.0) {
    const Eigen::MatrixXcd c0 = noisy_initial_guess(problem, kernel);
    NewtonResult r = run_newton(kernel, problem, c0);
    int total = r.iterations;
    if (r.status != NewtonStatus::Converged && problem.options.continuation && problem.alpha < 2.0) {
      diag.method = "continuation";
      NoisyProblemSpec step = problem;
      step.alpha = 2.0;
      Eigen::MatrixXcd cc = noisy_initial_guess(step, kernel);
      for (double a = 2.0;;) {
        const NoisyKernel k(problem, a);
        r = run_newton(k, problem, cc);
        total += r.iterations;
        if (r.status != NewtonStatus::Converged || a == problem.alpha) break;
        cc = unpack(r.x, T, cols);
        a = std::max(problem.alpha, a - 0.1);
      }
    }
    std::mt19937_64 rng(problem.options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    int starts = 1;
    for (; r.status != NewtonStatus::Converged && starts <= problem.options.multistart; ++starts) {
      Eigen::MatrixXcd cs = c0;
      for (Eigen::Index i = 0; i < cs.size(); ++i) cs.data()[i] *= Complex(1.0 + 0.5 * normal(rng), 0.5 * normal(rng));
      r = run_newton(kernel, problem, cs);
      total += r.iterations;
      diag.method = "multistart";
    }
    if (r.status != NewtonStatus::Converged) {
      throw Error(r.status == NewtonStatus::Singular ? ErrorCode::SingularJacobian : ErrorCode::NoConvergence,
                  "noisy outer solve stopped with residual " + format_value(r.residual_norm));
    }
    c = unpack(r.x, T, cols);
    diag.iterations = total;
    diag.starts = starts;
  }
  diag.converged = true;
  Solution s;
  s.c = c;
  s.h_grid = kernel.characteristic(c);
  s.h_fourier = fourier_window(s.h_grid, problem.grid, problem.options.fourier_window);
  s.error = error_norm_noisy(problem, s.h_grid);
  diag.residual_norm = kernel.residual(c).norm();
  s.diagnostics = diag;
  return s;
}

BlockMatrixSet build_blocks(const SpectralDensity& f, const SpectralDensity& g, int N, const AngleGrid& grid) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::ShapeMismatch, "signal and noise dimensions differ");
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
  const auto F = detail::field_matrices(f.eval(grid));
  const auto G = detail::field_matrices(g.eval(grid));
  std::vector<Eigen::MatrixXcd> b_field, d_field, r_field;
  b_field.reserve(grid.size());
  d_field.reserve(grid.size());
  r_field.reserve(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const Eigen::MatrixXcd S = F[m] + G[m];
    if (detail::condition_number(S) > 1e14)
      throw Error(ErrorCode::DegenerateNode, "f + g is singular at node " + std::to_string(m));
    const Eigen::MatrixXcd Sinv = S.inverse();
    b_field.push_back(Sinv.transpose());
    d_field.push_back((F[m] * Sinv).transpose());
    r_field.push_back((F[m] * Sinv * G[m]).transpose());
  }
  BlockMatrixSet out;
  out.dim = f.dim();
  out.horizon = N;
  out.B = detail::block_toeplitz(detail::matrix_fourier(b_field, grid, N), N);
  out.D = detail::block_toeplitz(detail::matrix_fourier(d_field, grid, N), N);
  out.R = detail::block_toeplitz(detail::matrix_fourier(r_field, grid, N), N);
  return out;
}

Eigen::MatrixXcd to_stationary_convention(const Eigen::MatrixXcd& c) { return c.conjugate(); }
Eigen::MatrixXcd from_stationary_convention(const Eigen::MatrixXcd& c) { return c.conjugate(); }

StationarySolution stationary_pipeline(const NoisyProblemSpec& problem) {
  validate_noisy(problem);
  if (problem.alpha != 2.0) throw Error(ErrorCode::InvalidArgument, "stationary pipeline requires alpha = 2");
  StationarySolution out;
  out.blocks = build_blocks(problem.f, problem.g, problem.horizon(), problem.grid);
  const BlockMatrixSet& b = out.blocks;
  const double cond = detail::condition_number(b.B);
  if (!(cond <= problem.options.cond_limit))
    throw Error(ErrorCode::SingularSystem, "B has condition " + format_value(cond));
  const Eigen::VectorXcd a = detail::stack(problem.weights);
  const Eigen::VectorXcd x = b.B.fullPivLu().solve(b.D * a);
  out.c_stationary = detail::unstack(x, problem.dim());
  out.delta = (a.adjoint() * b.R * a).value().real() + (x.adjoint() * b.B * x).value().real();

  const AngleGrid& grid = problem.grid;
  const DensityField F = problem.f.eval(grid);
  const DensityField G = problem.g.eval(grid);
  const Eigen::MatrixXcd A = weights_on_grid(problem.weights, grid, +1);
  const Eigen::MatrixXcd C = weights_on_grid(out.c_stationary, grid, +1);
  Solution& s = out.solution;
  s.c = from_stationary_convention(out.c_stationary);
  s.h_grid.resize(static_cast<Eigen::Index>(grid.size()), problem.dim());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    const Eigen::MatrixXcd Sinv = (F.at(m) + G.at(m)).inverse();
    const Eigen::VectorXcd h = (F.at(m) * Sinv).transpose() * A.row(mi).transpose() - Sinv.transpose() * C.row(mi).transpose();
    s.h_grid.row(mi) = h.transpose();
  }
  s.h_fourier = fourier_window(s.h_grid, grid, problem.options.fourier_window);
  s.error = kTwoPi * out.delta;
  s.diagnostics.method = "stationary";
  s.diagnostics.converged = true;
  s.diagnostics.residual_norm = orthogonality_defect(problem, s.h_grid);
  return out;
}

}  // namespace stabint
