#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "infgmres/problems.hpp"

namespace infgmres::test {

inline Mat random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

inline Vec random_vector(std::mt19937_64& rng, Index n) { return random_matrix(rng, n, 1).col(0); }

inline SpMat sparse(const Mat& m) { return m.sparseView(); }

inline double rel_diff(const Mat& a, const Mat& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// A(mu) = (1 - mu) I with b = e_1.
inline std::shared_ptr<GenericProblem> toy_problem(Index n = 2) {
  const Mat eye = Mat::Identity(n, n);
  return std::make_shared<GenericProblem>(std::vector<SpMat>{sparse(eye), sparse(-eye)}, Vec::Unit(n, 0),
                                          true);
}

/// Polynomial problem with dense random coefficients A_0..A_degree and a
/// well-conditioned A_0.
inline std::shared_ptr<GenericProblem> random_polynomial(Index n, int degree, std::uint64_t seed,
                                                         double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::vector<SpMat> coeffs;
  Mat a0 = random_matrix(rng, n, n) / std::sqrt(static_cast<double>(n));
  a0.diagonal().array() += 3.0;
  coeffs.push_back(sparse(a0));
  for (int i = 1; i <= degree; ++i) {
    coeffs.push_back(sparse(scale * random_matrix(rng, n, n) / std::sqrt(static_cast<double>(n))));
  }
  return std::make_shared<GenericProblem>(std::move(coeffs), random_vector(rng, n), true);
}

/// Generic low-rank problem: A_0..A_s dense random, U, V random n x p and
/// `tail` F-derivatives. Polynomial, so orders past the tail vanish.
inline std::shared_ptr<GenericLowRankProblem> random_lowrank(Index n, int s, Index p, int tail,
                                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<SpMat> coeffs;
  Mat a0 = random_matrix(rng, n, n) * inv;
  a0.diagonal().array() += 3.0;
  coeffs.push_back(sparse(a0));
  for (int i = 1; i <= s; ++i) coeffs.push_back(sparse(0.5 * random_matrix(rng, n, n) * inv));
  Mat u = random_matrix(rng, n, p) * inv;
  Mat v = random_matrix(rng, n, p) * inv;
  std::vector<Mat> f;
  for (int i = 0; i < tail; ++i) f.push_back(0.5 * random_matrix(rng, p, p));
  return std::make_shared<GenericLowRankProblem>(std::move(coeffs), std::move(u), std::move(v), std::move(f),
                                                 random_vector(rng, n), true);
}

/// Block-diagonal lift P = diag(I, ..., I, V^T, I_p, ...) from full
/// n-blocks to the low-rank layout.
inline Vec lowrank_project(const LowRankTaylorProblem& problem, const Vec& full, int blocks) {
  const Index n = problem.dim();
  const int s = problem.split_order();
  const Index p = problem.rank();
  Vec out(std::min(blocks, s) * n + std::max(0, blocks - s) * p);
  for (int l = 0; l < blocks; ++l) {
    const Vec x = full.segment(l * n, n);
    if (l < s) out.segment(l * n, n) = x;
    else out.segment(s * n + (l - s) * p, p) = problem.vt_apply(x);
  }
  return out;
}

}  // namespace infgmres::test
