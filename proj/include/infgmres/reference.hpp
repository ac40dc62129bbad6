#pragma once

#include <vector>

#include "infgmres/taylor_problem.hpp"

// Deliberately naive dense reference computations. They assemble the
// companion matrix explicitly and are only meant to check the matrix-free
// paths on small problems.
namespace infgmres::reference {

/// Hard limit on the order of any dense companion matrix.
inline constexpr Index dense_limit = 4000;

struct DenseCompanion {
  Mat matrix;
  int N = 0;
  Index n = 0;
  /// Low-rank layout only: s n-blocks followed by N+1-s p-blocks.
  int s = 0;
  Index p = 0;
};

/// B_N with block row 1 = (B_0, ..., B_N), B_i = -(1/(i+1)) A(0)^{-1} A^(i+1)(0),
/// and (1/j) I on the block subdiagonal.
DenseCompanion assemble_companion(const TaylorProblem& problem, int N);

/// The low-rank companion matrix: derivatives above order s enter block
/// row 1 as -(1/i) A(0)^{-1} U_i, the step from block s to s+1 is (1/s) V^T
/// and the later subdiagonal blocks are (1/i) I_p. Needs N >= s.
DenseCompanion assemble_companion_lowrank(const LowRankTaylorProblem& problem, int N);

/// vec(-A(0)^{-1} b, 0, ..., 0) of the given total length.
Vec linearized_rhs(const TaylorProblem& problem, Index length);

/// sum_{i=0..order} mu^i / i! A^(i)(0) as a dense matrix.
Mat truncated_taylor(const TaylorProblem& problem, Complex mu, int order);

struct DenseArnoldi {
  Mat q;     // size x (m+1), or size x m after a breakdown
  Mat hbar;  // (m+1) x m
};

/// Modified Gram-Schmidt Arnoldi on an explicit matrix started from rhs.
DenseArnoldi reference_arnoldi(const Mat& m, const Vec& rhs, int iterations);

struct GmresHistory {
  /// iterates[k-1] is the GMRES iterate after k steps.
  std::vector<Vec> iterates;
  std::vector<double> residuals;
};

/// Textbook GMRES (modified Gram-Schmidt Arnoldi, zero initial guess).
/// Stops early on an exact breakdown.
GmresHistory reference_gmres(const Mat& m, const Vec& rhs, int iterations);

/// Sparse LU solve of the assembled A(mu) x = b.
Vec direct_solve(const TaylorProblem& problem, Complex mu);

}  // namespace infgmres::reference
