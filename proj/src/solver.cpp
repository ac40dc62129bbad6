#include "infgmres/solver.hpp"

#include <algorithm>
#include <chrono>

#include <Eigen/QR>

namespace infgmres {

ShiftedLeastSquares solve_shifted_least_squares(const Mat& hbar, Complex mu, double rhs_norm) {
  const Index m = hbar.cols();
  if (hbar.rows() != m + 1) throw StructuralError("Hessenberg matrix must be (m+1) x m");
  if (m < 1) throw RangeError("least-squares problem needs at least one column");

  Mat shifted = mu * hbar;
  shifted.diagonal().array() -= 1.0;
  Vec rhs = Vec::Zero(m + 1);
  rhs(0) = rhs_norm;

  Eigen::CompleteOrthogonalDecomposition<Mat> cod(shifted);
  ShiftedLeastSquares out;
  out.z = cod.solve(rhs);
  out.residual = (shifted * out.z - rhs).norm();
  out.rank_deficient = cod.rank() < m;
  return out;
}

Evaluation evaluate(const ArnoldiFactorization& fac, Complex mu, int m) {
  if (m < 0) m = fac.iterations();
  if (m > fac.iterations()) throw RangeError("iteration budget exceeds the built factorization");

  Evaluation out;
  if (mu == Complex(0.0)) {
    out.x = fac.problem().solve_a0(fac.problem().rhs());
    return out;
  }
  if (m < 1) throw RangeError("evaluation needs at least one Arnoldi step");

  const ShiftedLeastSquares ls = solve_shifted_least_squares(fac.hessenberg(m), mu, fac.c_norm());
  out.x = fac.first_block_apply(ls.z);
  out.ls_residual = ls.residual;
  out.rank_deficient = ls.rank_deficient;
  return out;
}

bool SweepResult::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

SweepResult sweep(std::shared_ptr<const TaylorProblem> problem, std::span<const Complex> mu_values,
                  const SweepOptions& options) {
  if (mu_values.empty()) throw RangeError("sweep needs at least one mu value");
  if (!(options.tol > 0.0)) throw RangeError("tolerance must be positive");
  if (options.max_iters < 1) throw RangeError("max_iters must be at least 1");

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  const std::size_t count = mu_values.size();
  SweepResult result;
  result.mu_values.assign(mu_values.begin(), mu_values.end());
  result.solutions.resize(count);
  result.ls_residuals.assign(count, 0.0);
  result.true_residuals.assign(count, 0.0);
  result.iterations.assign(count, 0);
  result.converged.assign(count, false);
  result.wall_time_s.assign(count, 0.0);
  if (options.record_history) {
    result.true_history.resize(count);
    result.ls_history.resize(count);
  }

  ArnoldiFactorization fac(problem, options.variant, options.policy);
  fac.reserve(options.max_iters);
  result.c_norm = fac.c_norm();

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < count; ++i) {
    if (mu_values[i] == Complex(0.0)) {
      Evaluation e = evaluate(fac, mu_values[i]);
      result.true_residuals[i] = residual_true(*problem, mu_values[i], e.x);
      result.solutions[i] = std::move(e.x);
      result.converged[i] = result.true_residuals[i] <= options.tol;
      result.wall_time_s[i] = elapsed();
    } else {
      pending.push_back(i);
    }
  }

  std::vector<std::size_t> active = pending;
  while (!pending.empty() && fac.iterations() < options.max_iters) {
    const int before = fac.iterations();
    fac.step();
    if (fac.iterations() == before) break;
    const int m = fac.iterations();

    const auto batch = static_cast<long>(active.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < batch; ++b) {
      const std::size_t i = active[static_cast<std::size_t>(b)];
      Evaluation e = evaluate(fac, mu_values[i], m);
      const double res = residual_true(*problem, mu_values[i], e.x);
      if (options.record_history) {
        result.true_history[i].push_back(res);
        result.ls_history[i].push_back(e.ls_residual);
      }
      if (result.converged[i]) continue;
      result.solutions[i] = std::move(e.x);
      result.ls_residuals[i] = e.ls_residual;
      result.true_residuals[i] = res;
      result.iterations[i] = m;
      if (res <= options.tol) result.converged[i] = true;
    }

    const double now = elapsed();
    std::erase_if(pending, [&](std::size_t i) {
      if (!result.converged[i]) result.wall_time_s[i] = now;
      return result.converged[i];
    });
    for (std::size_t i : active) {
      if (result.converged[i] && result.iterations[i] == m) result.wall_time_s[i] = now;
    }
    if (!options.record_history) active = pending;
    if (fac.exact_subspace()) break;
  }
  result.iterations_used = fac.iterations();
  return result;
}

}  // namespace infgmres
