#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "infgmres/convergence.hpp"
#include "infgmres/kernels.hpp"
#include "infgmres/problems.hpp"
#include "infgmres/solver.hpp"

namespace infgmres::cli {

namespace {

class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timing(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::shared_ptr<const TaylorProblem> make_problem(const RunConfig& config) {
  if (config.problem == "delay") {
    DelayGenerator generator;
    generator.seed = config.seed;
    return build_delay(config.n > 0 ? config.n : 100, generator);
  }
  if (config.problem == "helmholtz1d") return build_helmholtz1d(config.n > 0 ? config.n : 200);
  const std::string prefix = "generic:";
  if (config.problem.rfind(prefix, 0) == 0 && config.problem.size() > prefix.size()) {
    return load_generic(config.problem.substr(prefix.size()));
  }
  throw ConfigError("unknown problem '" + config.problem + "' (delay, helmholtz1d or generic:<manifest>)");
}

BasisVariant checked_variant(const RunConfig& config, const TaylorProblem& problem) {
  BasisVariant variant{};
  try {
    variant = parse_variant(config.variant);
  } catch (const RangeError& e) {
    throw ConfigError(e.what());
  }
  if (variant == BasisVariant::lowrank && !dynamic_cast<const LowRankTaylorProblem*>(&problem)) {
    throw ConfigError("variant lowrank needs a problem with a low-rank tail; '" + config.problem +
                      "' has none");
  }
  return variant;
}

SweepOptions sweep_options(const RunConfig& config, BasisVariant variant, bool history) {
  if (!(config.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (config.max_iters < 1) throw ConfigError("--max-iters must be at least 1");
  SweepOptions options;
  options.tol = config.tol;
  options.max_iters = config.max_iters;
  options.variant = variant;
  options.record_history = history;
  return options;
}

std::vector<int> checked_outliers(const RunConfig& config) {
  if (config.outliers.empty()) throw ConfigError("--outliers needs at least one value");
  for (int j : config.outliers) {
    if (j < 0) throw ConfigError("--outliers values must be nonnegative");
  }
  return config.outliers;
}

/// ls residual history normalized to r_0 = 1 and prefixed with it.
std::vector<double> normalized_history(const std::vector<double>& ls, double c_norm) {
  std::vector<double> out{1.0};
  for (double r : ls) out.push_back(r / c_norm);
  return out;
}

double post_knee_factor(const std::vector<double>& history) {
  try {
    return observed_factor(history, knee_index(history));
  } catch (const UndefinedFactorError&) {
    return std::nan("");
  }
}

SpectrumEstimate ritz_spectrum(std::shared_ptr<const TaylorProblem> problem, const RunConfig& config,
                               BasisVariant variant, int count) {
  if (config.ritz_steps < 1) throw ConfigError("--ritz-steps must be at least 1");
  const ArnoldiFactorization fac = arnoldi_build(std::move(problem), config.ritz_steps, variant);
  return spectrum_ritz(fac, std::min(count, fac.iterations()));
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto mus = mu_values(config);
  const auto problem = make_problem(config);
  const auto variant = checked_variant(config, *problem);
  const SweepResult result = sweep(problem, mus, sweep_options(config, variant, false));

  out << "mu_re,mu_im,iterations,true_residual,ls_residual,converged,wall_time_s\n";
  for (std::size_t i = 0; i < mus.size(); ++i) {
    out << num(mus[i].real()) << ',' << num(mus[i].imag()) << ',' << result.iterations[i] << ','
        << num(result.true_residuals[i]) << ',' << num(result.ls_residuals[i] / result.c_norm) << ','
        << (result.converged[i] ? 1 : 0) << ',' << timing(result.wall_time_s[i]) << '\n';
  }
  if (!result.all_converged()) {
    err << "not all mu values reached tol " << config.tol << " within " << result.iterations_used
        << " iterations\n";
    return not_converged;
  }
  return ok;
}

int run_convergence(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto mus = mu_values(config);
  const auto outliers = checked_outliers(config);
  const auto problem = make_problem(config);
  const auto variant = checked_variant(config, *problem);
  const SweepResult result = sweep(problem, mus, sweep_options(config, variant, true));

  const int needed = *std::max_element(outliers.begin(), outliers.end()) + 1;
  const SpectrumEstimate spectrum = ritz_spectrum(problem, config, variant, needed);

  std::vector<std::vector<BoundPrediction>> bounds(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i) {
    for (int j : outliers) bounds[i].push_back(predict_bound(spectrum, mus[i], j));
  }

  out << "mu_re,mu_im,k,true_residual,ls_residual";
  for (int j : outliers) out << ",bound_j" << j;
  out << '\n';
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const auto& th = result.true_history[i];
    for (std::size_t k = 0; k < th.size(); ++k) {
      out << num(mus[i].real()) << ',' << num(mus[i].imag()) << ',' << k + 1 << ',' << num(th[k]) << ','
          << num(result.ls_history[i][k] / result.c_norm);
      for (const auto& b : bounds[i]) out << ',' << num(b.per_k(static_cast<int>(k + 1)));
      out << '\n';
    }
  }

  for (std::size_t i = 0; i < mus.size(); ++i) {
    const double rho = post_knee_factor(normalized_history(result.ls_history[i], result.c_norm));
    err << "rho mu=" << num(mus[i].real()) << (mus[i].imag() < 0 ? "" : "+") << num(mus[i].imag())
        << "i observed=" << num(rho);
    for (const auto& b : bounds[i]) err << " factor_j" << b.j << '=' << num(b.factor);
    err << '\n';
  }
  if (!result.all_converged()) {
    err << "not all mu values reached tol " << config.tol << '\n';
    return not_converged;
  }
  return ok;
}

int run_bound(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto mus = mu_values(config);
  const auto outliers = checked_outliers(config);
  const auto problem = make_problem(config);
  const auto variant = checked_variant(config, *problem);
  const SweepResult result = sweep(problem, mus, sweep_options(config, variant, true));

  const int needed = *std::max_element(outliers.begin(), outliers.end()) + 1;
  const SpectrumEstimate spectrum = ritz_spectrum(problem, config, variant, needed);

  out << "mu_re,mu_im,j,gamma_re,gamma_im,predicted_factor,observed_rho,separated\n";
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const double rho = post_knee_factor(normalized_history(result.ls_history[i], result.c_norm));
    for (int j : outliers) {
      const BoundPrediction b = predict_bound(spectrum, mus[i], j);
      const Complex g = spectrum.gammas[static_cast<std::size_t>(j)];
      if (!b.separated) {
        err << "warning: |gamma_" << j << "| is not strictly larger than |gamma_" << j + 1
            << "|; the outlier bound assumes separation\n";
      }
      out << num(mus[i].real()) << ',' << num(mus[i].imag()) << ',' << j << ',' << num(g.real()) << ','
          << num(g.imag()) << ',' << num(b.factor) << ',' << num(rho) << ',' << (b.separated ? 1 : 0) << '\n';
    }
  }
  return ok;
}

int run_gelfand(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto outliers = checked_outliers(config);
  if (outliers.size() != 1) throw ConfigError("gelfand takes a single --outliers value");
  if (config.k_max < 1) throw ConfigError("--k-max must be at least 1");
  if (!(config.kappa >= 1.0)) throw ConfigError("--kappa must be at least 1");
  const auto j = static_cast<std::size_t>(outliers.front());
  const ConstructedMatrix m = constructed_matrix(default_gelfand_spectrum(), config.kappa, config.seed);
  if (j >= m.spectrum.size()) throw ConfigError("--outliers exceeds the size of the test spectrum");

  const std::span<const Complex> dominant(m.spectrum.data(), j);
  const auto values = gelfand_limit_check(m.a, dominant, config.k_max);
  const double target = std::abs(m.spectrum[j]);
  out << "k,value,target\n";
  for (const auto& [k, value] : values) out << k << ',' << num(value) << ',' << num(target) << '\n';
  return ok;
}

}  // namespace

std::vector<Complex> mu_values(const RunConfig& config) {
  std::vector<double> reals = config.mu_list;
  if (!config.mu_range.empty()) {
    std::istringstream in(config.mu_range);
    double start = 0.0, stop = 0.0;
    long count = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || !in.eof()) {
      throw ConfigError("--mu-range must look like start:stop:count");
    }
    if (count < 1) throw ConfigError("--mu-range count must be at least 1");
    for (long i = 0; i < count; ++i) {
      reals.push_back(count == 1 ? start
                                 : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  }
  if (reals.empty()) throw ConfigError("no mu values given (use --mu or --mu-range)");
  if (!std::isfinite(config.mu_imag)) throw ConfigError("--mu-imag must be finite");
  std::vector<Complex> out;
  for (double r : reals) {
    if (!std::isfinite(r)) throw ConfigError("mu values must be finite");
    out.emplace_back(r, config.mu_imag);
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Parameter sweeps of A(mu) x = b with one infinite GMRES factorization", "infgmres"};
  app.require_subcommand(1);

  const auto add_problem_options = [&](CLI::App* sub, bool with_bounds) {
    sub->add_option("--problem", config.problem, "delay, helmholtz1d or generic:<manifest.json>");
    sub->add_option("--n", config.n, "problem size (delay: 100, helmholtz1d: 200)");
    sub->add_option("--variant", config.variant, "basis variant: full, lowrank or tensor");
    sub->add_option("--mu", config.mu_list, "comma-separated real parts of mu")->delimiter(',');
    sub->add_option("--mu-range", config.mu_range, "start:stop:count, end points included");
    sub->add_option("--mu-imag", config.mu_imag, "imaginary part added to every mu");
    sub->add_option("--tol", config.tol, "relative residual tolerance");
    sub->add_option("--max-iters", config.max_iters, "Arnoldi step limit");
    sub->add_option("--seed", config.seed, "seed of the random delay coefficients");
    sub->add_option("--out", config.out_path, "CSV file (default: standard output)");
    if (!with_bounds) return;
    sub->add_option("--outliers", config.outliers, "outlier counts j (comma-separated)")->delimiter(',');
    sub->add_option("--ritz-steps", config.ritz_steps, "Arnoldi steps behind the eigenvalue estimates");
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "solve for every mu and report convergence");
  add_problem_options(sweep_cmd, false);
  auto* conv_cmd = app.add_subcommand("convergence", "residual histories with predicted envelopes");
  add_problem_options(conv_cmd, true);
  auto* bound_cmd = app.add_subcommand("bound", "observed against predicted convergence factors");
  add_problem_options(bound_cmd, true);
  auto* gelfand_cmd = app.add_subcommand("gelfand", "outlier-aware Gelfand limit on a constructed matrix");
  gelfand_cmd->add_option("--outliers", config.outliers, "number j of annihilated eigenvalues");
  gelfand_cmd->add_option("--k-max", config.k_max, "largest power");
  gelfand_cmd->add_option("--kappa", config.kappa, "condition number of the eigenvector matrix");
  gelfand_cmd->add_option("--seed", config.seed, "seed of the eigenvector matrix");
  gelfand_cmd->add_option("--out", config.out_path, "CSV file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : bad_config;
  }

  kernels::configure_threads_from_env();
  config.subcommand = app.get_subcommands().front()->get_name();

  try {
    std::ofstream file;
    std::ostringstream buffer;
    std::ostream& sink = config.out_path.empty() ? out : static_cast<std::ostream&>(buffer);

    int code = ok;
    if (config.subcommand == "sweep") code = run_sweep(config, sink, err);
    else if (config.subcommand == "convergence") code = run_convergence(config, sink, err);
    else if (config.subcommand == "bound") code = run_bound(config, sink, err);
    else code = run_gelfand(config, sink, err);

    if (!config.out_path.empty()) {
      file.open(config.out_path);
      file << buffer.str();
      file.close();
      if (!file) throw IoError(config.out_path + ": cannot write output");
    }
    return code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return io_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return bad_config;
  }
}

}  // namespace infgmres::cli
