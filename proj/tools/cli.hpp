#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "infgmres/types.hpp"

namespace infgmres::cli {

enum ExitCode : int { ok = 0, bad_config = 1, not_converged = 2, io_failure = 3 };

struct RunConfig {
  std::string subcommand;
  std::string problem = "delay";
  Index n = 0;  // 0: problem default
  std::string variant = "full";
  std::vector<double> mu_list;
  std::string mu_range;  // start:stop:count
  double mu_imag = 0.0;
  double tol = 1e-12;
  int max_iters = 200;
  std::vector<int> outliers{0};
  std::uint64_t seed = 2023;
  std::string out_path;
  int ritz_steps = 60;
  int k_max = 200;
  double kappa = 10.0;
};

/// Expands mu_list and mu_range into the list of complex parameters.
std::vector<Complex> mu_values(const RunConfig& config);

/// Parses argv and runs one subcommand. CSV goes to the --out file or
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infgmres::cli
