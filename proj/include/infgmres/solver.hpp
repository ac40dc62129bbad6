#pragma once

#include <memory>
#include <span>
#include <vector>

#include "infgmres/krylov.hpp"

namespace infgmres {

struct ShiftedLeastSquares {
  Vec z;
  double residual = 0.0;
  bool rank_deficient = false;
};

/// argmin_z ||(mu Hbar - Ibar) z - e_1 rhs_norm|| by a rank-revealing dense
/// QR; the minimum-norm solution is returned when the matrix is singular.
ShiftedLeastSquares solve_shifted_least_squares(const Mat& hbar, Complex mu, double rhs_norm);

struct Evaluation {
  Vec x;
  /// Attained minimum of the shifted least-squares problem (absolute).
  double ls_residual = 0.0;
  bool rank_deficient = false;
};

/// Approximate solution after m Arnoldi steps; m defaults to all of them.
/// mu = 0 short-circuits to x = A(0)^{-1} b.
Evaluation evaluate(const ArnoldiFactorization& fac, Complex mu, int m = -1);

/// The map mu -> x_m(mu) backed by one fixed factorization.
class ParamSolution {
 public:
  explicit ParamSolution(std::shared_ptr<const ArnoldiFactorization> fac) : fac_(std::move(fac)) {}

  Evaluation evaluate(Complex mu, int m = -1) const { return infgmres::evaluate(*fac_, mu, m); }
  const ArnoldiFactorization& factorization() const { return *fac_; }
  const TaylorProblem& problem() const { return fac_->problem(); }

 private:
  std::shared_ptr<const ArnoldiFactorization> fac_;
};

struct SweepOptions {
  double tol = 1e-12;
  int max_iters = 200;
  BasisVariant variant = BasisVariant::full;
  OrthoPolicy policy{};
  /// Keep per-iteration residuals of every mu (needed for convergence plots).
  /// Converged values keep being evaluated and every history spans all
  /// iterations of the factorization; their reported results stay frozen.
  bool record_history = false;
};

struct SweepResult {
  std::vector<Complex> mu_values;
  std::vector<Vec> solutions;
  std::vector<double> ls_residuals;
  std::vector<double> true_residuals;
  /// Arnoldi steps after which each mu was accepted (or last evaluated).
  std::vector<int> iterations;
  std::vector<bool> converged;
  /// Seconds from the start of the sweep until each mu was settled.
  std::vector<double> wall_time_s;
  /// Size of the single factorization built for the whole set.
  int iterations_used = 0;
  double c_norm = 0.0;
  /// With record_history: entry k-1 holds the residual after k steps.
  std::vector<std::vector<double>> true_history;
  std::vector<std::vector<double>> ls_history;

  bool all_converged() const;
};

/// Grows one factorization step by step and evaluates every unconverged mu
/// after each step until the true relative residual is below tol for all of
/// them or max_iters is reached.
SweepResult sweep(std::shared_ptr<const TaylorProblem> problem, std::span<const Complex> mu_values,
                  const SweepOptions& options = {});

}  // namespace infgmres
