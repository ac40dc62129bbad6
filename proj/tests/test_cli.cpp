#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace infgmres::cli {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "infgmres");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

using Table = std::vector<std::vector<std::string>>;

Table parse_csv(const std::string& text) {
  Table rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

TEST(Cli, DelaySweepIterationsGrowWithMu) {
  const auto r = invoke({"sweep", "--problem", "delay", "--n", "100", "--mu-range", "0.01:0.2:20", "--tol", "1e-12"});
  ASSERT_EQ(r.code, ok) << r.err;
  const Table t = parse_csv(r.out);
  ASSERT_EQ(t.size(), 21u);
  EXPECT_EQ(t[0], (std::vector<std::string>{"mu_re", "mu_im", "iterations", "true_residual", "ls_residual",
                                            "converged", "wall_time_s"}));
  int previous = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    ASSERT_EQ(t[i].size(), 7u);
    const int its = std::stoi(t[i][2]);
    EXPECT_GE(its, previous);
    previous = its;
    EXPECT_LE(std::stod(t[i][3]), 1e-12);
    EXPECT_EQ(t[i][5], "1");
  }
  EXPECT_NEAR(std::stod(t[1][0]), 0.01, 1e-15);
  EXPECT_NEAR(std::stod(t[20][0]), 0.2, 1e-15);
}

TEST(Cli, ConfigurationErrors) {
  EXPECT_EQ(invoke({"sweep", "--problem", "delay"}).code, bad_config);
  EXPECT_EQ(invoke({"sweep", "--problem", "delay", "--mu", "0.1", "--variant", "lowrank"}).code, bad_config);
  EXPECT_EQ(invoke({"sweep", "--problem", "nonsense", "--mu", "0.1"}).code, bad_config);
  EXPECT_EQ(invoke({"sweep", "--mu", "0.1", "--variant", "sparse"}).code, bad_config);
  EXPECT_EQ(invoke({"sweep", "--mu-range", "1:2"}).code, bad_config);
  EXPECT_EQ(invoke({"sweep", "--mu", "0.1", "--tol", "-1"}).code, bad_config);
  EXPECT_EQ(invoke({"sweep", "--mu", "0.1", "--bogus"}).code, bad_config);
  EXPECT_EQ(invoke({}).code, bad_config);
  EXPECT_EQ(invoke({"--help"}).code, ok);
  const auto r = invoke({"sweep", "--problem", "delay"});
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, NotConvergedExitCode) {
  const auto r = invoke({"sweep", "--n", "50", "--mu", "0.1", "--max-iters", "2"});
  EXPECT_EQ(r.code, not_converged);
  const Table t = parse_csv(r.out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1][5], "0");
}

TEST(Cli, IoFailures) {
  EXPECT_EQ(invoke({"sweep", "--mu", "0.1", "--n", "20", "--out", "/nonexistent_dir/out.csv"}).code, io_failure);
  EXPECT_EQ(invoke({"sweep", "--mu", "0.1", "--problem", "generic:/nonexistent_dir/m.json"}).code, io_failure);
}

TEST(Cli, OutputFileAndDeterminism) {
  const auto path = std::filesystem::temp_directory_path() / "infgmres_cli_out.csv";
  std::filesystem::remove(path);
  const std::vector<std::string> args{"sweep", "--n", "30", "--mu", "0.05,0.1", "--mu-imag", "0.2", "--out",
                                      path.string()};
  const auto r = invoke(args);
  ASSERT_EQ(r.code, ok) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Table t = parse_csv(buffer.str());
  ASSERT_EQ(t.size(), 3u);
  EXPECT_NEAR(std::stod(t[1][1]), 0.2, 1e-15);

  const auto a = parse_csv(invoke({"sweep", "--n", "30", "--mu", "0.05,0.1"}).out);
  const auto b = parse_csv(invoke({"sweep", "--n", "30", "--mu", "0.05,0.1"}).out);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t c = 0; c + 1 < a[i].size(); ++c) EXPECT_EQ(a[i][c], b[i][c]);
  }
}

TEST(Cli, ConvergenceHistoriesWithBounds) {
  const auto r = invoke({"convergence", "--n", "100", "--mu", "0.01,0.1", "--outliers", "0,2"});
  ASSERT_EQ(r.code, ok) << r.err;
  const Table t = parse_csv(r.out);
  ASSERT_GT(t.size(), 2u);
  EXPECT_EQ(t[0], (std::vector<std::string>{"mu_re", "mu_im", "k", "true_residual", "ls_residual", "bound_j0",
                                            "bound_j2"}));
  int expected_k = 1;
  std::string mu = t[1][0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i][0] != mu) {
      mu = t[i][0];
      expected_k = 1;
    }
    EXPECT_EQ(std::stoi(t[i][2]), expected_k++);
  }
  EXPECT_NE(r.err.find("rho mu=0.01"), std::string::npos);
  EXPECT_NE(r.err.find("factor_j0="), std::string::npos);
}

TEST(Cli, BoundReportsObservedBelowPredicted) {
  const auto r = invoke({"bound", "--n", "100", "--mu", "0.01,0.1"});
  ASSERT_EQ(r.code, ok) << r.err;
  const Table t = parse_csv(r.out);
  ASSERT_EQ(t.size(), 3u);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double predicted = std::stod(t[i][5]);
    const double observed = std::stod(t[i][6]);
    EXPECT_LE(observed, 1.1 * predicted) << t[i][0];
  }
}

TEST(Cli, GelfandCurve) {
  const auto r = invoke({"gelfand", "--outliers", "2", "--k-max", "200"});
  ASSERT_EQ(r.code, ok) << r.err;
  const Table t = parse_csv(r.out);
  ASSERT_EQ(t.size(), 201u);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_TRUE(std::isfinite(std::stod(t[i][1])));
  EXPECT_NEAR(std::stod(t[200][1]), 1.0, 0.05);
  EXPECT_DOUBLE_EQ(std::stod(t[200][2]), 1.0);

  const Table plain = parse_csv(invoke({"gelfand", "--outliers", "0", "--k-max", "200"}).out);
  EXPECT_NEAR(std::stod(plain[200][1]), 3.0, 0.15);
  EXPECT_EQ(invoke({"gelfand", "--outliers", "20"}).code, bad_config);
  EXPECT_EQ(invoke({"gelfand", "--kappa", "0.5"}).code, bad_config);
}

TEST(Cli, MuValues) {
  RunConfig config;
  config.mu_list = {0.5};
  config.mu_range = "0:1:3";
  config.mu_imag = -1.0;
  const auto mus = mu_values(config);
  ASSERT_EQ(mus.size(), 4u);
  EXPECT_EQ(mus[0], Complex(0.5, -1.0));
  EXPECT_EQ(mus[2], Complex(0.5, -1.0));
  EXPECT_EQ(mus[3], Complex(1.0, -1.0));
}

}  // namespace
}  // namespace infgmres::cli
