#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "infgmres/kernels.hpp"
#include "infgmres/problems.hpp"
#include "infgmres/solver.hpp"

namespace {

using namespace infgmres;

std::vector<Vec> ragged_basis(Index n, int columns) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<Vec> basis;
  for (int j = 0; j < columns; ++j) {
    Vec v((j + 1) * n);
    for (auto& x : v) x = Complex(normal(rng), normal(rng));
    basis.push_back(v.normalized());
  }
  return basis;
}

template <bool Parallel>
void BM_Project(benchmark::State& state) {
  const Index n = state.range(0);
  const int columns = static_cast<int>(state.range(1));
  const auto basis = ragged_basis(n, columns);
  const Vec y = Vec::Ones((columns + 1) * n);
  Vec h;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::project(basis, y, h);
    else kernels::serial::project(basis, y, h);
    benchmark::DoNotOptimize(h.data());
  }
}

template <bool Parallel>
void BM_Subtract(benchmark::State& state) {
  const Index n = state.range(0);
  const int columns = static_cast<int>(state.range(1));
  const auto basis = ragged_basis(n, columns);
  const Vec h = Vec::Constant(columns, 1e-3);
  Vec y = Vec::Ones((columns + 1) * n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::subtract(basis, h, y);
    else kernels::serial::subtract(basis, h, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_SweepEvaluation(benchmark::State& state) {
  const auto problem = build_delay(state.range(0));
  const auto fac = std::make_shared<const ArnoldiFactorization>(arnoldi_build(problem, 30, BasisVariant::full));
  const ParamSolution solution(fac);
  double mu = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solution.evaluate(mu).x.data());
    mu = mu < 0.2 ? mu + 0.01 : 0.01;
  }
}

}  // namespace

BENCHMARK(BM_Project<false>)->Args({1000, 20})->Args({10000, 40});
BENCHMARK(BM_Project<true>)->Args({1000, 20})->Args({10000, 40});
BENCHMARK(BM_Subtract<false>)->Args({1000, 20})->Args({10000, 40});
BENCHMARK(BM_Subtract<true>)->Args({1000, 20})->Args({10000, 40});
BENCHMARK(BM_SweepEvaluation)->Arg(100)->Arg(1000);

int main(int argc, char** argv) {
  infgmres::kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
