#pragma once

#include <memory>
#include <optional>
#include <variant>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "infgmres/types.hpp"

namespace infgmres {

/// A parameter-dependent system A(mu) x = b that is analytic around mu = 0.
///
/// Implementations expose A only through its actions: the inverse of A(0),
/// the Taylor derivatives A^(i)(0) and the exact matrix A(mu). Instances are
/// immutable after construction and may be shared between threads.
class TaylorProblem {
 public:
  virtual ~TaylorProblem() = default;

  virtual Index dim() const = 0;
  virtual const Vec& rhs() const = 0;

  /// y -> A(0)^{-1} y, using a factorization prepared at construction.
  virtual Vec solve_a0(const Vec& y) const = 0;

  /// y -> A^(order)(0) y for order >= 0.
  virtual Vec derivative_apply(int order, const Vec& y) const = 0;

  /// y -> A(mu) y with the untruncated A.
  virtual Vec evaluate_apply(Complex mu, const Vec& y) const = 0;

  /// Explicit sparse A(mu); used by direct solves and dense oracles.
  virtual SpMat assemble(Complex mu) const = 0;

  /// When set, A^(i)(0) = 0 for every i above the returned degree.
  virtual std::optional<int> polynomial_degree() const { return std::nullopt; }

  /// sum_{l=1..k} (1/l) A^(l)(0) x_l where x_l is column l-1 of `blocks`.
  /// Problems with closed-form derivative families override this.
  virtual Vec weighted_derivative_sum(const Eigen::Ref<const Mat>& blocks) const;
};

/// A problem whose derivatives above order s have the form U_i V^T with
/// U_i = U F^(i)(0) of rank p.
class LowRankTaylorProblem : public TaylorProblem {
 public:
  virtual int split_order() const = 0;
  virtual Index rank() const = 0;

  /// z (length p) -> U_i z for order i > split_order().
  virtual Vec lowrank_apply(int order, const Vec& z) const = 0;

  /// y (length n) -> V^T y.
  virtual Vec vt_apply(const Vec& y) const = 0;
};

/// LU factorization of A(0): dense partial pivoting up to `dense_limit`
/// unknowns, sparse LU above.
class A0Factorization {
 public:
  static constexpr Index dense_limit = 2000;

  A0Factorization() = default;
  explicit A0Factorization(const SpMat& a0);

  Vec solve(const Vec& y) const;
  bool is_dense() const { return std::holds_alternative<DenseLu>(lu_); }

 private:
  using DenseLu = Eigen::PartialPivLU<Mat>;
  using SparseLu = std::shared_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>;
  std::variant<std::monostate, DenseLu, SparseLu> lu_;
};

}  // namespace infgmres
