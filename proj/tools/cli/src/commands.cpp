// SPDX-License-Identifier: Apache-2.0
#include "stabint_cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <variant>

#include "stabint_cli/json_io.hpp"
#include "stabint_cli/validate.hpp"

#ifndef STABINT_VERSION
#define STABINT_VERSION "0.0.0"
#endif

namespace stabint::cli {

namespace {

json header(Command command) {
  return {{"tool", "stabint"},
          {"tool_version", STABINT_VERSION},
          {"format_version", 1},
          {"command", std::string(command_name(command))},
          {"timestamp", timestamp_utc()}};
}

json problem_json(const RunConfig& cfg) {
  json p = {{"alpha", cfg.alpha},
            {"components", cfg.weights.rows()},
            {"horizon", cfg.weights.cols() - 1},
            {"grid", cfg.grid},
            {"weights", to_json(cfg.weights)}};
  if (cfg.period) p["period"] = *cfg.period;
  return p;
}

ProblemSpec make_problem(const RunConfig& cfg) {
  ProblemSpec p;
  p.alpha = cfg.alpha;
  p.weights = cfg.weights;
  p.f = cfg.f;
  p.grid = AngleGrid(cfg.grid);
  p.options = cfg.solver;
  p.validate();
  return p;
}

NoisyProblemSpec make_noisy_problem(const RunConfig& cfg) {
  NoisyProblemSpec p;
  static_cast<ProblemSpec&>(p) = make_problem(cfg);
  p.g = cfg.g ? *cfg.g : SpectralDensity::structured(
                             static_cast<int>(cfg.weights.rows()),
                             {{Eigen::MatrixXcd::Zero(cfg.weights.rows(), cfg.weights.rows()), ConstantDensity{0.0}}});
  return p;
}

json grid_json(const AngleGrid& grid, const Eigen::MatrixXcd& values) {
  json comps = json::array();
  for (Eigen::Index k = 0; k < values.cols(); ++k) comps.push_back(to_json(Eigen::VectorXcd(values.col(k))));
  return {{"theta", grid.nodes()}, {"values", std::move(comps)}};
}

json solution_json(const ProblemSpec& p, const Solution& s) {
  return {{"c", to_json(s.c)},
          {"h", {{"fourier", to_json(s.h_fourier)}, {"grid", grid_json(p.grid, s.h_grid)}}},
          {"error", s.error}};
}

json diagnostics_json(const Diagnostics& d) {
  return {{"method", d.method},
          {"iterations", d.iterations},
          {"residual_norm", d.residual_norm},
          {"converged", d.converged},
          {"starts", d.starts}};
}

json minimality_json(const MinimalityReport& m) {
  return {{"finite", m.finite}, {"value", m.value}, {"sequence", m.sequence}};
}

std::string h_csv(const ProblemSpec& p, const Eigen::MatrixXcd& h, const SpectralDensity& density) {
  const DensityField field = density.eval(p.grid);
  std::ostringstream os;
  os << std::setprecision(17) << "theta,component,re_h,im_h,f\n";
  for (Eigen::Index k = 0; k < h.cols(); ++k)
    for (std::size_t m = 0; m < p.grid.size(); ++m)
      os << p.grid.node(m) << ',' << k << ',' << h(static_cast<Eigen::Index>(m), k).real() << ','
         << h(static_cast<Eigen::Index>(m), k).imag() << ',' << field.at(m)(k, k).real() << '\n';
  return os.str();
}

json class_json(const DensityClassSpec& cls) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, D0Class>) return {{"kind", "D0"}, {"P", c.P}};
        else if constexpr (std::is_same_v<T, DBetaClass>) return {{"kind", "DBeta"}, {"beta", c.beta}, {"P", c.P}};
        else if constexpr (std::is_same_v<T, DMMinusClass>) return {{"kind", "DMMinus"}, {"moments", c.moments}};
        else return {{"kind", "DMinusOne"}, {"P1", c.P1}};
      },
      cls);
}

json minimax_json(const MinimaxProblem& problem, const MinimaxResult& r) {
  Eigen::MatrixXcd h(r.h0.size(), 1);
  h.col(0) = r.h0;
  json diag = {{"lagrange_flatness", r.lagrange_flatness},
               {"flatness_ratio", r.flatness_ratio},
               {"constraint_residual", r.constraint_residual},
               {"iterations", r.iterations},
               {"converged", r.converged}};
  if (r.exponent != 0.0) diag["exponent"] = r.exponent;
  if (!r.multipliers.empty()) diag["multipliers"] = r.multipliers;
  if (!r.factor.empty()) diag["factor"] = to_json(r.factor);
  if (r.inverse_density.size() > 1 || r.inverse_density.coeff(0) != Complex(0.0, 0.0))
    diag["inverse_density"] = to_json(r.inverse_density);
  return {{"c", to_json(r.c)},
          {"h", {{"fourier", json::array({to_json(r.h0_fourier)})}, {"grid", grid_json(problem.grid, h)}}},
          {"error", r.delta},
          {"f0", {{"theta", problem.grid.nodes()}, {"values", r.f0}}},
          {"diagnostics", std::move(diag)}};
}

json stats_json(const EstimatorStats& s) {
  return {{"mse", s.mse}, {"mse_stderr", s.mse_stderr}, {"median_abs", s.median_abs}, {"q90_abs", s.q90_abs}};
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::DensityVanishes:
    case ErrorCode::DegenerateFunctional:
    case ErrorCode::ExponentSingular:
    case ErrorCode::NotPositive:
      return kExitConfigError;
    default:
      return kExitSolverFailed;
  }
}

CommandOutput run_estimate(const RunConfig& cfg) {
  const ProblemSpec p = make_problem(cfg);
  const Solution s = solve_coefficients(p);
  CommandOutput out;
  out.document = header(Command::Estimate);
  out.document["problem"] = problem_json(cfg);
  out.document.update(solution_json(p, s));
  json diag = diagnostics_json(s.diagnostics);
  diag["orthogonality_defect"] = orthogonality_defect(p, s.h_grid);
  diag["defining_equation_defect"] = defining_equation_defect(p, s);
  diag["minimality"] = minimality_json(check_minimality(p.f, nullptr, p.alpha, p.grid));
  out.document["diagnostics"] = std::move(diag);
  out.csv = h_csv(p, s.h_grid, p.f);
  return out;
}

CommandOutput run_estimate_noisy(const RunConfig& cfg) {
  const NoisyProblemSpec p = make_noisy_problem(cfg);
  const Solution s = solve_coefficients_noisy(p);
  CommandOutput out;
  out.document = header(Command::EstimateNoisy);
  out.document["problem"] = problem_json(cfg);
  out.document.update(solution_json(p, s));
  json diag = diagnostics_json(s.diagnostics);
  diag["orthogonality_defect"] = orthogonality_defect(p, s.h_grid);
  diag["pointwise_equation_defect"] = pointwise_equation_defect(p, s);
  diag["minimality"] = minimality_json(check_minimality(p.f, &p.g, p.alpha, p.grid));
  out.document["diagnostics"] = std::move(diag);
  if (p.alpha == 2.0) {
    const StationarySolution st = stationary_pipeline(p);
    out.document["stationary"] = {{"c", to_json(st.c_stationary)},
                                  {"delta", st.delta},
                                  {"error", st.solution.error}};
  }
  out.csv = h_csv(p, s.h_grid, p.f);
  return out;
}

CommandOutput run_minimax(const RunConfig& cfg) {
  MinimaxProblem problem;
  problem.alpha = cfg.alpha;
  problem.weights = cfg.weights.row(0).transpose();
  problem.grid = AngleGrid(cfg.grid);
  problem.options = cfg.solver;
  const DensityClassSpec& cls = *cfg.density_class;

  CommandOutput out;
  out.document = header(Command::Minimax);
  out.document["problem"] = problem_json(cfg);
  out.document["class"] = class_json(cls);
  MinimaxResult result;
  try {
    result = least_favorable(problem, cls, cfg.minimax);
  } catch (const NoFixedPointError& e) {
    out.document.update(minimax_json(problem, e.partial()));
    out.document["failure"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    out.exit_code = kExitSolverFailed;
    return out;
  }
  out.document.update(minimax_json(problem, result));
  const SaddleReport saddle = verify_saddle(problem, result, cls, cfg.probes, cfg.seed);
  out.document["saddle"] = {{"flatness_ratio", saddle.flatness_ratio},
                            {"delta0", saddle.delta0},
                            {"max_probe_delta", saddle.max_probe_delta},
                            {"probes", saddle.probes},
                            {"violations", saddle.violations},
                            {"finite", saddle.finite},
                            {"worst_excess", saddle.worst_excess}};

  std::ostringstream os;
  os << std::setprecision(17) << "theta,re_h,im_h,f0\n";
  for (std::size_t m = 0; m < problem.grid.size(); ++m) {
    const Complex h = result.h0(static_cast<Eigen::Index>(m));
    os << problem.grid.node(m) << ',' << h.real() << ',' << h.imag() << ',' << result.f0[m] << '\n';
  }
  out.csv = os.str();
  return out;
}

CommandOutput run_simulate(const RunConfig& cfg) {
  const NoisyProblemSpec p = make_noisy_problem(cfg);
  const Solution s = cfg.g ? solve_coefficients_noisy(p) : solve_coefficients(p);
  const SimulationSettings& st = cfg.simulate;
  const int N = p.horizon();
  const int K = cfg.solver.fourier_window;

  if (st.perturb_component < 0 || st.perturb_component >= p.dim())
    throw ConfigError("$.simulate.perturb.component", "out of range");
  if (st.perturb_index >= 0 && st.perturb_index <= N)
    throw ConfigError("$.simulate.perturb.index", "must lie outside the interpolated range 0.." + std::to_string(N));

  SimConfig sim;
  sim.alpha = cfg.alpha;
  sim.f = cfg.f;
  sim.g = cfg.g;
  sim.grid_size = st.grid_size;
  sim.replicates = st.replicates;
  sim.lo = st.lo.value_or(-K);
  sim.hi = st.hi.value_or(N + K);
  sim.seed = cfg.seed;
  sim.threads = st.threads;
  if (sim.lo > 0 || sim.hi < N) throw ConfigError("$.simulate", "index range lo..hi must contain 0..N");
  if (st.perturb_index < sim.lo || st.perturb_index > sim.hi)
    throw ConfigError("$.simulate.perturb.index", "must lie inside lo..hi");

  std::vector<TrigPolynomial> perturbed = s.h_fourier;
  auto& target = perturbed[static_cast<std::size_t>(st.perturb_component)];
  target = target + TrigPolynomial(st.perturb_index, {st.perturb_offset});

  const SamplePaths paths = simulate_paths(sim);
  std::optional<double> predicted;
  if (cfg.alpha == 2.0) predicted = s.error;
  const ComparisonReport rep = empirical_compare(paths, s.h_fourier, perturbed, p.weights, predicted);

  CommandOutput out;
  out.document = header(Command::Simulate);
  out.document["problem"] = problem_json(cfg);
  out.document["c"] = to_json(s.c);
  out.document["h"] = {{"fourier", to_json(s.h_fourier)}};
  out.document["error"] = s.error;
  out.document["simulation"] = {{"replicates", sim.replicates},
                                {"grid_size", sim.grid_size},
                                {"lo", sim.lo},
                                {"hi", sim.hi},
                                {"seed", sim.seed},
                                {"perturb",
                                 {{"component", st.perturb_component},
                                  {"index", st.perturb_index},
                                  {"offset", to_json(st.perturb_offset)}}}};
  out.document["optimal"] = stats_json(rep.optimal);
  out.document["perturbed"] = stats_json(rep.perturbed);
  out.document["predicted_mse"] = predicted ? json(*predicted) : json(nullptr);
  out.document["z_score"] = predicted ? json(rep.z_score) : json(nullptr);
  out.document["fraction_optimal_smaller"] = rep.fraction_optimal_smaller;
  out.document["optimal_dominates"] = rep.optimal.mse < rep.perturbed.mse;

  std::ostringstream os;
  os << std::setprecision(17) << "replicate,abs_error_optimal,abs_error_perturbed\n";
  for (std::size_t r = 0; r < rep.optimal.abs_errors.size(); ++r)
    os << r << ',' << rep.optimal.abs_errors[r] << ',' << rep.perturbed.abs_errors[r] << '\n';
  out.csv = os.str();
  return out;
}

CommandOutput run_factorize(const RunConfig& cfg) {
  const auto gamma = fejer_riesz(cfg.polynomial, cfg.factor_tol);
  const TrigPolynomial back = causal_power(gamma);
  const int top = std::max({std::abs(cfg.polynomial.lo()), std::abs(cfg.polynomial.hi()), back.hi()});
  double err = 0.0;
  for (int k = -top; k <= top; ++k) err = std::max(err, std::abs(back.coeff(k) - cfg.polynomial.coeff(k)));
  CommandOutput out;
  out.document = header(Command::Factorize);
  out.document["polynomial"] = to_json(cfg.polynomial);
  out.document["gamma"] = to_json(gamma);
  out.document["reconstruction_error"] = err;
  return out;
}

CommandOutput run_validate(const RunConfig& cfg) {
  const ValidationReport report = run_validation(builtin_manifest(), cfg.grid);
  CommandOutput out;
  out.document = header(Command::Validate);
  out.document["grid"] = cfg.grid;
  out.document["report"] = to_json(report);
  out.document["all_passed"] = report.all_passed();
  out.table = format_table(report);
  out.exit_code = report.all_passed() ? kExitOk : kExitValidationFailed;
  return out;
}

CommandOutput dispatch(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Estimate: return run_estimate(cfg);
    case Command::EstimateNoisy: return run_estimate_noisy(cfg);
    case Command::Minimax: return run_minimax(cfg);
    case Command::Simulate: return run_simulate(cfg);
    case Command::Factorize: return run_factorize(cfg);
    case Command::Validate: return run_validate(cfg);
  }
  throw ConfigError("$", "unknown command");
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg;
    if (request.config) {
      cfg = load_config(*request.config, request.command, request.overrides);
    } else if (request.command == Command::Validate) {
      cfg = parse_config(json{{"version", kConfigVersion}}, Command::Validate, request.overrides);
    } else {
      throw ConfigError("--config", "a config file is required for " + std::string(command_name(request.command)));
    }

    CommandOutput result = dispatch(cfg);

    if (!result.table.empty()) out << result.table;
    const std::string text = result.document.dump(2) + "\n";
    if (request.out) {
      std::ofstream f(*request.out);
      if (!(f << text)) throw ConfigError("--out", "cannot write " + request.out->string());
    } else if (result.table.empty()) {
      out << text;
    }
    if (request.csv) {
      if (result.csv.empty()) {
        err << "note: " << command_name(request.command) << " produces no CSV output\n";
      } else {
        std::ofstream f(*request.csv);
        if (!(f << result.csv)) throw ConfigError("--csv", "cannot write " + request.csv->string());
      }
    }
    if (result.document.contains("failure"))
      err << "solver failure: " << result.document["failure"]["message"].get<std::string>() << '\n';
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    err << (code == kExitConfigError ? "invalid input: " : "solver failure: ") << e.what() << '\n';
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolverFailed;
  }
}

}  // namespace stabint::cli
