#include "infgmres/reference.hpp"

#include <string>

#include <Eigen/SparseLU>

namespace infgmres::reference {

namespace {

void guard(Index order) {
  if (order > dense_limit) {
    throw SizeGuardError("dense companion of order " + std::to_string(order) +
                         " exceeds the limit of " + std::to_string(dense_limit));
  }
}

/// Columns A(0)^{-1} A^(order)(0) e_k.
Mat scaled_derivative(const TaylorProblem& problem, int order) {
  const Index n = problem.dim();
  Mat out(n, n);
  for (Index k = 0; k < n; ++k) {
    out.col(k) = problem.solve_a0(problem.derivative_apply(order, Vec::Unit(n, k)));
  }
  return out;
}

}  // namespace

DenseCompanion assemble_companion(const TaylorProblem& problem, int N) {
  if (N < 0) throw RangeError("truncation order must be nonnegative");
  const Index n = problem.dim();
  guard((N + 1) * n);

  DenseCompanion out;
  out.N = N;
  out.n = n;
  out.matrix = Mat::Zero((N + 1) * n, (N + 1) * n);
  for (int i = 0; i <= N; ++i) {
    out.matrix.block(0, i * n, n, n) = -scaled_derivative(problem, i + 1) / static_cast<double>(i + 1);
  }
  for (int j = 1; j <= N; ++j) {
    out.matrix.block(j * n, (j - 1) * n, n, n) = Mat::Identity(n, n) / static_cast<double>(j);
  }
  return out;
}

DenseCompanion assemble_companion_lowrank(const LowRankTaylorProblem& problem, int N) {
  const Index n = problem.dim();
  const int s = problem.split_order();
  const Index p = problem.rank();
  if (N < s) throw RangeError("low-rank companion needs N >= s");
  const Index size = s * n + (N + 1 - s) * p;
  guard(size);

  const auto offset = [&](int block) {  // 0-based block index
    return block <= s ? block * n : s * n + (block - s) * p;
  };

  DenseCompanion out;
  out.N = N;
  out.n = n;
  out.s = s;
  out.p = p;
  out.matrix = Mat::Zero(size, size);

  for (int l = 1; l <= s; ++l) {
    out.matrix.block(0, offset(l - 1), n, n) = -scaled_derivative(problem, l) / static_cast<double>(l);
  }
  for (int l = s + 1; l <= N + 1; ++l) {
    for (Index k = 0; k < p; ++k) {
      out.matrix.col(offset(l - 1) + k).head(n) =
          -problem.solve_a0(problem.lowrank_apply(l, Vec::Unit(p, k))) / static_cast<double>(l);
    }
  }
  for (int j = 1; j < s; ++j) {
    out.matrix.block(offset(j), offset(j - 1), n, n) = Mat::Identity(n, n) / static_cast<double>(j);
  }
  if (N + 1 > s) {
    for (Index k = 0; k < n; ++k) {
      out.matrix.col(offset(s - 1) + k).segment(offset(s), p) =
          problem.vt_apply(Vec::Unit(n, k)) / static_cast<double>(s);
    }
  }
  for (int i = s + 1; i <= N; ++i) {
    out.matrix.block(offset(i), offset(i - 1), p, p) = Mat::Identity(p, p) / static_cast<double>(i);
  }
  return out;
}

Vec linearized_rhs(const TaylorProblem& problem, Index length) {
  Vec c = Vec::Zero(length);
  c.head(problem.dim()) = -problem.solve_a0(problem.rhs());
  return c;
}

Mat truncated_taylor(const TaylorProblem& problem, Complex mu, int order) {
  const Index n = problem.dim();
  Mat out = Mat::Zero(n, n);
  Complex weight = 1.0;
  for (int i = 0; i <= order; ++i) {
    for (Index k = 0; k < n; ++k) out.col(k) += weight * problem.derivative_apply(i, Vec::Unit(n, k));
    weight *= mu / static_cast<double>(i + 1);
  }
  return out;
}

DenseArnoldi reference_arnoldi(const Mat& m, const Vec& rhs, int iterations) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) throw StructuralError("Arnoldi needs a square system");
  const double beta0 = rhs.norm();
  if (beta0 == 0.0) throw EmptyKrylovError("zero starting vector");

  DenseArnoldi out;
  out.q = Mat::Zero(m.rows(), iterations + 1);
  out.hbar = Mat::Zero(iterations + 1, iterations);
  out.q.col(0) = rhs / beta0;
  for (int k = 0; k < iterations; ++k) {
    Vec w = m * out.q.col(k);
    for (int i = 0; i <= k; ++i) {
      out.hbar(i, k) = out.q.col(i).dot(w);
      w -= out.hbar(i, k) * out.q.col(i);
    }
    const double beta = w.norm();
    if (beta <= 1e-14 * beta0) {
      out.q.conservativeResize(Eigen::NoChange, k + 1);
      out.hbar.conservativeResize(k + 2, k + 1);
      return out;
    }
    out.hbar(k + 1, k) = beta;
    out.q.col(k + 1) = w / beta;
  }
  return out;
}

GmresHistory reference_gmres(const Mat& m, const Vec& rhs, int iterations) {
  GmresHistory out;
  const double beta0 = rhs.norm();
  if (beta0 == 0.0) return out;
  const DenseArnoldi arnoldi = reference_arnoldi(m, rhs, iterations);
  const int steps = static_cast<int>(arnoldi.hbar.cols());
  for (int k = 1; k <= steps; ++k) {
    const bool last_breakdown = k == steps && arnoldi.q.cols() == k;
    const Index rows = last_breakdown ? k : k + 1;
    Vec e1 = Vec::Zero(rows);
    e1(0) = beta0;
    const Vec y = arnoldi.hbar.topLeftCorner(rows, k).colPivHouseholderQr().solve(e1);
    Vec x = arnoldi.q.leftCols(k) * y;
    out.residuals.push_back((rhs - m * x).norm());
    out.iterates.push_back(std::move(x));
  }
  return out;
}

Vec direct_solve(const TaylorProblem& problem, Complex mu) {
  const SpMat a = problem.assemble(mu);
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw Error("A(mu) is singular: " + lu.lastErrorMessage());
  Vec x = lu.solve(problem.rhs());
  if (lu.info() != Eigen::Success || !x.allFinite()) throw Error("direct solve of A(mu) failed");
  return x;
}

}  // namespace infgmres::reference
