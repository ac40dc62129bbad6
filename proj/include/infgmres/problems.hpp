#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "infgmres/taylor_problem.hpp"

namespace infgmres {

/// Transfer function of a time-delay system with unit delay:
/// A(s) = -s I + A0 + A1 exp(-s).
class DelayProblem final : public TaylorProblem {
 public:
  DelayProblem(SpMat a0, SpMat a1, Vec b);

  Index dim() const override { return a0_.rows(); }
  const Vec& rhs() const override { return b_; }
  Vec solve_a0(const Vec& y) const override { return lu_.solve(y); }
  Vec derivative_apply(int order, const Vec& y) const override;
  Vec evaluate_apply(Complex mu, const Vec& y) const override;
  SpMat assemble(Complex mu) const override;
  Vec weighted_derivative_sum(const Eigen::Ref<const Mat>& blocks) const override;

  const SpMat& a0() const { return a0_; }
  const SpMat& a1() const { return a1_; }

 private:
  SpMat a0_;
  SpMat a1_;
  Vec b_;
  A0Factorization lu_;
};

/// Reproducible sparse random coefficients for the delay problem. Both
/// matrices get about `nonzeros_per_row` normally distributed entries per
/// row and are scaled to unit 2-norm; then A0 = shift I + a0_scale R0 and
/// A1 = a1_scale R1.
struct DelayGenerator {
  std::uint64_t seed = 2023;
  double nonzeros_per_row = 10.0;
  double shift = -2.0;
  double a0_scale = 0.5;
  double a1_scale = 0.5;
};

/// b defaults to the all-ones vector when empty.
std::shared_ptr<DelayProblem> build_delay(Index n, const DelayGenerator& generator = {},
                                          Vec b = Vec());

/// Finite-difference discretization of
///   u'' + (1 + mu k(x))^2 u + beta(x) u = h(x) on [0, 1],  u(0) = 0,
/// with the exterior [1, 1.5] replaced by the exact mu-dependent Robin
/// condition g(mu) u(1) + f(mu) u'(1) = 0 (one-sided second-order stencil).
/// A_n(mu) = D_n + K_n(mu) + L_n + X_n F(mu) Y_n^T with F = diag(g, f);
/// derivatives above order 2 are X_n F^(i)(0) Y_n^T (s = 2, p = 2).
class Helmholtz1DProblem final : public LowRankTaylorProblem {
 public:
  static constexpr double domain_end = 1.0;     // b
  static constexpr double exterior_end = 1.5;   // c
  static constexpr double alpha = 10.0;
  static constexpr double k_exterior = 5.0;     // k0 = k(b)

  explicit Helmholtz1DProblem(Index n);

  Index dim() const override { return n_; }
  const Vec& rhs() const override { return h_; }
  Vec solve_a0(const Vec& y) const override { return lu_.solve(y); }
  Vec derivative_apply(int order, const Vec& y) const override;
  Vec evaluate_apply(Complex mu, const Vec& y) const override;
  SpMat assemble(Complex mu) const override;

  int split_order() const override { return 2; }
  Index rank() const override { return 2; }
  Vec lowrank_apply(int order, const Vec& z) const override;
  Vec vt_apply(const Vec& y) const override;

  double dx() const { return dx_; }
  /// Grid values k(x_i), beta(x_i) for i = 1..n.
  const RealVec& k_values() const { return k_; }
  const RealVec& beta_values() const { return beta_; }

  /// Robin coefficients and their mu-derivatives at 0.
  static Complex g(Complex mu);
  static Complex f(Complex mu);
  static double g_derivative(int order);
  static double f_derivative(int order);

  static double k_of(double x);
  static double beta_of(double x);
  static double h_of(double x);

 private:
  /// D_n + diag(1, ..., 1, 0) + L_n: the mu-independent part without the
  /// boundary row.
  SpMat interior_;
  Index n_;
  double dx_;
  RealVec k_;
  RealVec beta_;
  Vec h_;
  A0Factorization lu_;
};

std::shared_ptr<Helmholtz1DProblem> build_helmholtz1d(Index n);

/// A(mu) = sum_i mu^i / i! A_i from an explicit list of derivative
/// matrices A_i = A^(i)(0). Orders past the list are an error unless the
/// problem is declared polynomial, in which case they are zero.
class GenericProblem final : public TaylorProblem {
 public:
  GenericProblem(std::vector<SpMat> coefficients, Vec rhs, bool polynomial = false);

  Index dim() const override { return rhs_.size(); }
  const Vec& rhs() const override { return rhs_; }
  Vec solve_a0(const Vec& y) const override { return lu_.solve(y); }
  Vec derivative_apply(int order, const Vec& y) const override;
  Vec evaluate_apply(Complex mu, const Vec& y) const override;
  SpMat assemble(Complex mu) const override;
  std::optional<int> polynomial_degree() const override;

  const std::vector<SpMat>& coefficients() const { return coefficients_; }

 private:
  std::vector<SpMat> coefficients_;
  Vec rhs_;
  bool polynomial_;
  A0Factorization lu_;
};

/// Generic problem with a low-rank tail: A_0..A_s listed explicitly and
/// A^(i)(0) = U F^(i)(0) V^T for i > s with F^(s+1)(0), F^(s+2)(0), ...
/// listed in order.
class GenericLowRankProblem final : public LowRankTaylorProblem {
 public:
  GenericLowRankProblem(std::vector<SpMat> coefficients, Mat u, Mat v, std::vector<Mat> f_derivatives,
                        Vec rhs, bool polynomial = false);

  Index dim() const override { return rhs_.size(); }
  const Vec& rhs() const override { return rhs_; }
  Vec solve_a0(const Vec& y) const override { return lu_.solve(y); }
  Vec derivative_apply(int order, const Vec& y) const override;
  Vec evaluate_apply(Complex mu, const Vec& y) const override;
  SpMat assemble(Complex mu) const override;
  std::optional<int> polynomial_degree() const override;

  int split_order() const override { return static_cast<int>(coefficients_.size()) - 1; }
  Index rank() const override { return u_.cols(); }
  Vec lowrank_apply(int order, const Vec& z) const override;
  Vec vt_apply(const Vec& y) const override { return v_.transpose() * y; }

 private:
  const Mat& f_at(int order) const;

  std::vector<SpMat> coefficients_;
  Mat u_;
  Mat v_;
  std::vector<Mat> f_derivatives_;
  Vec rhs_;
  bool polynomial_;
  A0Factorization lu_;
};

/// Loads a problem from a JSON manifest:
///   { "n": 100, "rhs": "b.mtx", "coefficients": ["A0.mtx", "A1.mtx", ...],
///     "polynomial": false,
///     "lowrank": { "s": 2, "U": "U.mtx", "V": "V.mtx",
///                  "F_derivs": ["F3.mtx", "F4.mtx", ...] } }
/// Paths are relative to the manifest's directory. Returns a
/// GenericLowRankProblem when "lowrank" is present.
std::shared_ptr<TaylorProblem> load_generic(const std::filesystem::path& manifest_path);

}  // namespace infgmres
