// SPDX-License-Identifier: Apache-2.0
#include "stabint/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "stabint/fejer_riesz.hpp"
#include "stabint/interp_noiseless.hpp"

namespace stabint {

namespace {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double integral(const std::vector<double>& v) { return kTwoPi * grid_mean(v); }

void validate_template(const MinimaxProblem& p) {
  if (!(p.alpha > 1.0 && p.alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (1, 2]");
  if (p.weights.size() < 1) throw Error(ErrorCode::InvalidArgument, "weights must have at least one entry");
  if (!p.weights.allFinite()) throw Error(ErrorCode::NonFiniteValue, "weights contain non-finite entries");
  if (p.weights.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorCode::DegenerateFunctional, "all weights are zero; every density is least favorable");
}

ProblemSpec spec_at(const MinimaxProblem& p, const std::vector<double>& f) {
  ProblemSpec s;
  s.alpha = p.alpha;
  s.weights = p.weights.transpose();
  s.f = SampledDensity{p.grid.nodes(), f};
  s.grid = p.grid;
  s.options = p.options;
  return s;
}

std::vector<double> modulus_c(const MinimaxProblem& p, const Eigen::MatrixXcd& c) {
  const Eigen::MatrixXcd C = weights_on_grid(c, p.grid, -1);
  std::vector<double> out(p.grid.size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = std::abs(C(static_cast<Eigen::Index>(m), 0));
  return out;
}

/// |A - h|^alpha = (|C| / f)^{alpha/(alpha-1)} on the grid.
std::vector<double> lagrange_base(const MinimaxProblem& p, const std::vector<double>& modc,
                                  const std::vector<double>& f) {
  const double e = p.alpha / (p.alpha - 1.0);
  std::vector<double> out(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) out[m] = std::pow(modc[m] / f[m], e);
  return out;
}

std::pair<double, double> sup_inf(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*hi, *lo};
}

using Update = std::function<std::vector<double>(const std::vector<double>& f, const std::vector<double>& modc)>;
using Stationarity =
    std::function<std::vector<double>(const std::vector<double>& f, const std::vector<double>& lagrange)>;
using Constraint = std::function<double(const std::vector<double>& f)>;

void finalize(const MinimaxProblem& p, const std::vector<double>& f, const Stationarity& stationarity,
              const Constraint& constraint, MinimaxResult& r, const Eigen::MatrixXcd* warm = nullptr) {
  const Solution sol = solve_coefficients(spec_at(p, f), warm);
  r.f0 = f;
  r.c = sol.c.row(0).transpose();
  r.h0 = sol.h_grid.col(0);
  r.h0_fourier = sol.h_fourier.front();
  r.delta = sol.error;
  const std::vector<double> q = stationarity(f, lagrange_base(p, modulus_c(p, sol.c), f));
  const auto [sup, inf] = sup_inf(q);
  r.flatness_ratio = inf > 0.0 ? sup / inf : std::numeric_limits<double>::infinity();
  r.lagrange_flatness = r.flatness_ratio - 1.0;
  r.constraint_residual = constraint(f);
}

MinimaxResult run_fixed_point(const MinimaxProblem& p, std::vector<double> f, const Update& update,
                              const Stationarity& stationarity, const Constraint& constraint,
                              const MinimaxOptions& opt, const std::string& name) {
  MinimaxResult r;
  const double scale = grid_mean(f);
  double change = 0.0;
  Eigen::MatrixXcd warm;
  auto partial = [&](const std::vector<double>& fl, const Solution* sol) {
    MinimaxResult out = r;
    out.f0 = fl;
    if (sol != nullptr) {
      out.c = sol->c.row(0).transpose();
      out.h0 = sol->h_grid.col(0);
      out.h0_fourier = sol->h_fourier.front();
      out.delta = sol->error;
    }
    return out;
  };
  std::optional<Solution> last;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<double> next;
    try {
      last = solve_coefficients(spec_at(p, f), warm.size() > 0 ? &warm : nullptr);
      warm = last->c;
      next = update(f, modulus_c(p, last->c));
    } catch (const Error& e) {
      throw NoFixedPointError(name + " iteration " + std::to_string(it) + " failed: " + e.what(),
                              partial(f, last ? &*last : nullptr));
    }
    change = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) change = std::max(change, std::abs(next[m] - f[m]));
    f = std::move(next);
    r.iterations = it;
    if (change < opt.tol * scale) {
      r.converged = true;
      break;
    }
  }
  try {
    finalize(p, f, stationarity, constraint, r, warm.size() > 0 ? &warm : nullptr);
  } catch (const Error& e) {
    throw NoFixedPointError(name + " final solve failed: " + e.what(), partial(f, last ? &*last : nullptr));
  }
  if (!r.converged)
    throw NoFixedPointError(name + " fixed point not reached after " + std::to_string(r.iterations) +
                                " iterations (last change " + format_value(change / scale) + ", flatness " +
                                format_value(r.lagrange_flatness) + ")",
                            r);
  return r;
}

void require_finite_positive(const std::vector<double>& f, const char* what) {
  for (std::size_t m = 0; m < f.size(); ++m)
    if (!std::isfinite(f[m]) || !(f[m] > 0.0))
      throw Error(ErrorCode::DensityVanishes,
                  std::string(what) + " density is zero or non-finite at grid node " + std::to_string(m));
}

double beta_integral(const std::vector<double>& f, double beta) {
  std::vector<double> pw(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) pw[m] = std::pow(f[m], beta);
  return integral(pw);
}

std::vector<double> rescale_beta(std::vector<double> f, double beta, double P) {
  const double s = std::pow(P / beta_integral(f, beta), 1.0 / beta);
  for (auto& v : f) v *= s;
  return f;
}

/// Fits Lambda = sum_m lambda_m cos(m theta) > 0 with int w Lambda^s cos(m theta) = r_m.
std::vector<double> fit_multipliers(const std::vector<double>& w, double s, const std::vector<double>& r,
                                    const AngleGrid& grid, std::vector<double> lambda) {
  const int M1 = static_cast<int>(r.size());
  const std::size_t n = grid.size();
  const double dx = grid.spacing();
  std::vector<double> cosines(static_cast<std::size_t>(M1) * n);
  for (int k = 0; k < M1; ++k)
    for (std::size_t m = 0; m < n; ++m) cosines[static_cast<std::size_t>(k) * n + m] = std::cos(k * grid.node(m));

  auto Lambda = [&](const std::vector<double>& lam, std::vector<double>& out) {
    out.assign(n, 0.0);
    for (int k = 0; k < M1; ++k)
      for (std::size_t m = 0; m < n; ++m) out[m] += lam[static_cast<std::size_t>(k)] * cosines[k * n + m];
    return std::all_of(out.begin(), out.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
  };
  auto objective = [&](const std::vector<double>& lam, const std::vector<double>& L) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) acc += w[m] * std::pow(L[m], s + 1.0);
    acc *= dx / (s + 1.0);
    for (int k = 0; k < M1; ++k) acc -= lam[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)];
    return acc;
  };

  std::vector<double> L;
  if (lambda.size() != r.size() || !Lambda(lambda, L)) {
    double wint = 0.0;
    for (double v : w) wint += v * dx;
    lambda.assign(r.size(), 0.0);
    lambda[0] = std::pow(r[0] / wint, 1.0 / s);
    Lambda(lambda, L);
  }
  double rscale = 0.0;
  for (double v : r) rscale += std::abs(v);

  Eigen::VectorXd grad(M1);
  for (int it = 0; it < 200; ++it) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(M1, M1);
    grad.setZero();
    for (std::size_t m = 0; m < n; ++m) {
      const double g1 = w[m] * std::pow(L[m], s) * dx;
      const double h1 = s * w[m] * std::pow(L[m], s - 1.0) * dx;
      for (int a = 0; a < M1; ++a) {
        const double ca = cosines[a * n + m];
        grad(a) += g1 * ca;
        for (int b = 0; b <= a; ++b) H(a, b) += h1 * ca * cosines[b * n + m];
      }
    }
    for (int a = 0; a < M1; ++a) {
      grad(a) -= r[static_cast<std::size_t>(a)];
      for (int b = 0; b < a; ++b) H(b, a) = H(a, b);
    }
    if (grad.norm() <= 1e-12 * rscale) return lambda;
    const Eigen::VectorXd step = -H.ldlt().solve(grad);
    if (!step.allFinite()) break;
    const double phi0 = objective(lambda, L);
    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial(lambda.size()), Lt;
    for (int b = 0; b < 60; ++b, t *= 0.5) {
      for (int k = 0; k < M1; ++k) trial[static_cast<std::size_t>(k)] = lambda[static_cast<std::size_t>(k)] + t * step(k);
      if (!Lambda(trial, Lt)) continue;
      if (objective(trial, Lt) <= phi0 + 1e-4 * t * grad.dot(step) + 1e-15 * std::abs(phi0)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (grad.norm() <= 1e-9 * rscale) return lambda;  // rounding floor
      break;
    }
    lambda = trial;
    L = std::move(Lt);
  }
  std::string msg = "moment constraints cannot be matched; residuals:";
  for (int a = 0; a < M1; ++a) msg += " " + format_value(grad(a));
  throw Error(ErrorCode::MomentInfeasible, msg);
}

double moments_residual(const std::vector<double>& f, const std::vector<double>& r, const AngleGrid& grid) {
  double worst = 0.0;
  double scale = 0.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < r.size(); ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) acc += std::cos(static_cast<double>(k) * grid.node(m)) / f[m];
    worst = std::max(worst, std::abs(acc * grid.spacing() - r[k]));
  }
  return worst / scale;
}

}  // namespace

SpectralDensity MinimaxResult::density(const AngleGrid& grid) const {
  if (grid.size() != f0.size())
    throw Error(ErrorCode::ShapeMismatch, "grid size does not match the stored least favorable density");
  return SampledDensity{grid.nodes(), f0};
}

double dbeta_exponent(double alpha, double beta) {
  if (beta == 1.0) throw Error(ErrorCode::ExponentSingular, "beta = 1 is excluded from the power class");
  const double denom = -alpha - (alpha - 1.0) * (beta - 1.0);
  if (denom == 0.0 || std::abs(denom) < 1e-12 * alpha)
    throw Error(ErrorCode::ExponentSingular, "beta = -1/(alpha-1) makes the least favorable exponent singular");
  return -alpha / denom;
}

MinimaxResult least_favorable_D0(const MinimaxProblem& problem, double P, const MinimaxOptions& options) {
  validate_template(problem);
  if (!(P > 0.0) || !std::isfinite(P)) throw Error(ErrorCode::InvalidArgument, "class power P must be positive");
  const double omega = options.relaxation;
  Update update = [&](const std::vector<double>& f, const std::vector<double>& modc) {
    const double k = P / integral(modc);
    std::vector<double> next(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) next[m] = (1.0 - omega) * f[m] + omega * k * modc[m];
    require_finite_positive(next, "least favorable");
    return next;
  };
  Stationarity stat = [](const std::vector<double>&, const std::vector<double>& lag) { return lag; };
  Constraint cons = [P](const std::vector<double>& f) { return std::abs(integral(f) - P) / P; };
  return run_fixed_point(problem, std::vector<double>(problem.grid.size(), P / kTwoPi), update, stat, cons, options,
                         "D0");
}

MinimaxResult least_favorable_DBeta(const MinimaxProblem& problem, double beta, double P,
                                    const MinimaxOptions& options) {
  validate_template(problem);
  if (!(P > 0.0) || !std::isfinite(P)) throw Error(ErrorCode::InvalidArgument, "class power P must be positive");
  if (!std::isfinite(beta) || beta == 0.0) throw Error(ErrorCode::InvalidArgument, "beta must be finite and nonzero");
  const double e = dbeta_exponent(problem.alpha, beta);
  const double omega = options.relaxation;
  Update update = [&](const std::vector<double>& f, const std::vector<double>& modc) {
    std::vector<double> target(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) target[m] = std::pow(modc[m], e);
    require_finite_positive(target, "least favorable");
    target = rescale_beta(std::move(target), beta, P);
    std::vector<double> next(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) next[m] = (1.0 - omega) * f[m] + omega * target[m];
    return rescale_beta(std::move(next), beta, P);
  };
  Stationarity stat = [beta](const std::vector<double>& f, const std::vector<double>& lag) {
    std::vector<double> q(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) q[m] = lag[m] / std::pow(f[m], beta - 1.0);
    return q;
  };
  Constraint cons = [beta, P](const std::vector<double>& f) { return std::abs(beta_integral(f, beta) - P) / P; };
  const double level = std::pow(P / kTwoPi, 1.0 / beta);
  MinimaxResult r = run_fixed_point(problem, std::vector<double>(problem.grid.size(), level), update, stat, cons,
                                    options, "DBeta");
  r.exponent = e;
  return r;
}

MinimaxResult least_favorable_DMMinus(const MinimaxProblem& problem, const std::vector<double>& moments,
                                      const MinimaxOptions& options) {
  validate_template(problem);
  if (!(problem.alpha < 2.0))
    throw Error(ErrorCode::InvalidArgument, "the inverse-moment class needs 1 < alpha < 2 strictly");
  if (moments.empty()) throw Error(ErrorCode::InvalidArgument, "at least one moment r_0 is required");
  if (!(moments[0] > 0.0)) throw Error(ErrorCode::InvalidArgument, "moment r_0 must be positive");
  for (double v : moments)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "moments must be finite");
  if (2 * static_cast<int>(moments.size()) >= static_cast<int>(problem.grid.size()))
    throw Error(ErrorCode::GridTooCoarse, "too many moments for the grid");

  const double alpha = problem.alpha;
  const double s = (alpha - 1.0) / (2.0 - alpha);
  const double wexp = -alpha / (2.0 - alpha);
  const double omega = options.relaxation;
  std::vector<double> lambda;
  Update update = [&](const std::vector<double>& f, const std::vector<double>& modc) {
    std::vector<double> w(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) w[m] = std::pow(modc[m], wexp);
    require_finite_positive(w, "inverse-moment weight");
    lambda = fit_multipliers(w, s, moments, problem.grid, lambda);
    std::vector<double> next(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) {
      double L = 0.0;
      for (std::size_t k = 0; k < lambda.size(); ++k) L += lambda[k] * std::cos(static_cast<double>(k) * problem.grid.node(m));
      next[m] = 1.0 / ((1.0 - omega) / f[m] + omega * w[m] * std::pow(L, s));
    }
    require_finite_positive(next, "least favorable");
    return next;
  };
  Stationarity stat = [&](const std::vector<double>& f, const std::vector<double>& lag) {
    std::vector<double> q(f.size());
    for (std::size_t m = 0; m < f.size(); ++m) {
      double L = 0.0;
      for (std::size_t k = 0; k < lambda.size(); ++k) L += lambda[k] * std::cos(static_cast<double>(k) * problem.grid.node(m));
      q[m] = lag[m] * f[m] * f[m] / L;
    }
    return q;
  };
  Constraint cons = [&](const std::vector<double>& f) { return moments_residual(f, moments, problem.grid); };

  MinimaxResult r = run_fixed_point(problem, std::vector<double>(problem.grid.size(), kTwoPi / moments[0]), update,
                                    stat, cons, options, "DMMinus");
  r.multipliers = lambda;
  const int M = static_cast<int>(lambda.size()) - 1;
  TrigPolynomial cosine_sum = TrigPolynomial::zero(-M, M);
  cosine_sum[0] = lambda[0];
  for (int k = 1; k <= M; ++k) {
    cosine_sum[k] = 0.5 * lambda[static_cast<std::size_t>(k)];
    cosine_sum[-k] = 0.5 * lambda[static_cast<std::size_t>(k)];
  }
  // |sum_m p_m e^{i m theta}|^2 = Lambda with p_m = conj(gamma_m).
  r.factor = fejer_riesz(cosine_sum, 1e-8);
  for (auto& v : r.factor) v = std::conj(v);
  return r;
}

MinimaxResult least_favorable_DMinusOne(const MinimaxProblem& problem, double P1) {
  validate_template(problem);
  if (!(P1 > 0.0) || !std::isfinite(P1)) throw Error(ErrorCode::InvalidArgument, "P1 must be positive");
  const int N = static_cast<int>(problem.weights.size()) - 1;
  for (int j = 0; j <= N; ++j) {
    const Complex a = problem.weights(j);
    if (a.imag() != 0.0 || !(a.real() > 0.0))
      throw Error(ErrorCode::InvalidArgument, "weights must be real and strictly positive, a(" + std::to_string(j) +
                                                  ") is not");
  }
  if (2 * N >= static_cast<int>(problem.grid.size())) throw Error(ErrorCode::GridTooCoarse, "grid too coarse");

  TrigPolynomial inverse = TrigPolynomial::zero(-N, N);
  const double a0 = problem.weights(0).real();
  inverse[0] = P1;
  for (int k = 1; k <= N; ++k) {
    const double rk = P1 * problem.weights(k).real() / a0;
    inverse[k] = rk;
    inverse[-k] = rk;
  }
  const std::vector<Complex> values = evaluate_on_grid(inverse, problem.grid);
  double vmax = 0.0;
  double vmin = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    vmax = std::max(vmax, values[m].real());
    if (values[m].real() < vmin) {
      vmin = values[m].real();
      argmin = m;
    }
  }
  if (!(vmin > 1e-12 * vmax))
    throw Error(ErrorCode::NotPositive, "inverse density " + format_value(vmin) + " at theta = " +
                                            format_value(problem.grid.node(argmin)) +
                                            " is not strictly positive");

  MinimaxResult r;
  r.inverse_density = inverse;
  r.factor = fejer_riesz(inverse, 1e-10);
  std::vector<double> f(values.size());
  for (std::size_t m = 0; m < f.size(); ++m) f[m] = 1.0 / values[m].real();
  Stationarity stat = [](const std::vector<double>& ff, const std::vector<double>& lag) {
    std::vector<double> q(ff.size());
    for (std::size_t m = 0; m < ff.size(); ++m) q[m] = lag[m] * ff[m] * ff[m];
    return q;
  };
  Constraint cons = [P1](const std::vector<double>& ff) {
    std::vector<double> inv(ff.size());
    for (std::size_t m = 0; m < ff.size(); ++m) inv[m] = 1.0 / ff[m];
    return std::abs(grid_mean(inv) - P1) / P1;
  };
  finalize(problem, f, stat, cons, r);
  r.converged = true;
  return r;
}

MinimaxResult least_favorable(const MinimaxProblem& problem, const DensityClassSpec& cls,
                              const MinimaxOptions& options) {
  return std::visit(
      [&](const auto& c) -> MinimaxResult {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, D0Class>) return least_favorable_D0(problem, c.P, options);
        else if constexpr (std::is_same_v<T, DBetaClass>) return least_favorable_DBeta(problem, c.beta, c.P, options);
        else if constexpr (std::is_same_v<T, DMMinusClass>) return least_favorable_DMMinus(problem, c.moments, options);
        else return least_favorable_DMinusOne(problem, c.P1);
      },
      cls);
}

double characteristic_error(const MinimaxProblem& problem, const Eigen::VectorXcd& h, const std::vector<double>& f) {
  if (static_cast<std::size_t>(h.size()) != problem.grid.size() || f.size() != problem.grid.size())
    throw Error(ErrorCode::ShapeMismatch, "characteristic and density must live on the problem grid");
  const Eigen::MatrixXcd A = weights_on_grid(problem.weights.transpose(), problem.grid, +1);
  std::vector<double> integrand(f.size());
  for (std::size_t m = 0; m < f.size(); ++m)
    integrand[m] = std::pow(std::abs(A(static_cast<Eigen::Index>(m), 0) - h(static_cast<Eigen::Index>(m))),
                            problem.alpha) *
                   f[m];
  return integral(integrand);
}

SaddleReport verify_saddle(const MinimaxProblem& problem, const MinimaxResult& result, const DensityClassSpec& cls,
                           int probes, std::uint64_t seed, double tol) {
  SaddleReport rep;
  rep.flatness_ratio = result.flatness_ratio;
  rep.finite = result.h0.allFinite();
  const std::vector<double>& f0 = result.f0;
  const std::size_t n = f0.size();
  rep.delta0 = characteristic_error(problem, result.h0, f0);
  rep.max_probe_delta = rep.delta0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.5);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const AngleGrid& grid = problem.grid;

  // Random smooth log-shape for additive-in-f classes.
  auto random_shape = [&]() {
    double ac[3], bc[3];
    for (int k = 0; k < 3; ++k) {
      ac[k] = gauss(rng);
      bc[k] = gauss(rng);
    }
    std::vector<double> w(n);
    for (std::size_t m = 0; m < n; ++m) {
      double x = 0.0;
      for (int k = 0; k < 3; ++k) x += ac[k] * std::cos((k + 1) * grid.node(m)) + bc[k] * std::sin((k + 1) * grid.node(m));
      w[m] = std::exp(x);
    }
    return w;
  };
  // Perturbation of f^{-1} orthogonal to cos(k theta), k = 0..kmax.
  auto inverse_perturbation = [&](int kmax) {
    double ac[3], bc[3];
    for (int k = 0; k < 3; ++k) {
      ac[k] = gauss(rng);
      bc[k] = gauss(rng);
    }
    std::vector<double> q(n);
    double qmax = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      double x = 0.0;
      for (int k = 0; k < 3; ++k)
        x += ac[k] * std::cos((kmax + 1 + k) * grid.node(m)) + bc[k] * std::sin((k + 1) * grid.node(m));
      q[m] = x;
      qmax = std::max(qmax, std::abs(x));
    }
    for (auto& v : q) v /= qmax;
    return q;
  };
  double inv_min = std::numeric_limits<double>::infinity();
  for (double v : f0) inv_min = std::min(inv_min, 1.0 / v);

  for (int i = 0; i < probes; ++i) {
    const double lam = unif(rng);
    std::vector<double> fp(n);
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, D0Class>) {
            std::vector<double> w = random_shape();
            const double k = c.P / integral(w);
            for (std::size_t m = 0; m < n; ++m) fp[m] = (1.0 - lam) * f0[m] + lam * k * w[m];
          } else if constexpr (std::is_same_v<T, DBetaClass>) {
            std::vector<double> w = rescale_beta(random_shape(), c.beta, c.P);
            for (std::size_t m = 0; m < n; ++m) fp[m] = (1.0 - lam) * f0[m] + lam * w[m];
            fp = rescale_beta(std::move(fp), c.beta, c.P);
          } else {
            int kmax = 0;
            if constexpr (std::is_same_v<T, DMMinusClass>) kmax = static_cast<int>(c.moments.size()) - 1;
            const std::vector<double> q = inverse_perturbation(kmax);
            const double eps = 0.5 * inv_min;
            for (std::size_t m = 0; m < n; ++m) fp[m] = 1.0 / (1.0 / f0[m] + lam * eps * q[m]);
          }
        },
        cls);
    const double d = characteristic_error(problem, result.h0, fp);
    ++rep.probes;
    if (!std::isfinite(d)) {
      rep.finite = false;
      continue;
    }
    rep.max_probe_delta = std::max(rep.max_probe_delta, d);
    const double excess = d - rep.delta0;
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (excess > tol * std::max(1.0, std::abs(rep.delta0))) ++rep.violations;
  }
  return rep;
}

}  // namespace stabint
