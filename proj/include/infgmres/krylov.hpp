#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "infgmres/linearization.hpp"

namespace infgmres {

enum class BasisVariant { full, lowrank, tensor };

std::string_view to_string(BasisVariant variant);
BasisVariant parse_variant(std::string_view name);

/// Classical Gram-Schmidt with either an unconditional second pass or a
/// second pass only when ||y_perp|| < reorth_threshold * ||y||.
struct OrthoPolicy {
  enum class Kind { classical_twice, classical_conditional };

  Kind kind = Kind::classical_twice;
  double reorth_threshold = 1.0 / std::sqrt(2.0);
  /// beta <= breakdown_tol * ||y|| is reported as an exact (lucky) breakdown.
  double breakdown_tol = 1e-14;
};

struct GramSchmidtResult {
  Vec h;
  double beta = 0.0;
  Vec q_new;       // unit vector, or empty on breakdown
  int passes = 0;
};

/// Orthogonalizes y against a ragged orthonormal basis (columns implicitly
/// zero past their stored length) so that y = sum h_i q_i + beta q_new.
GramSchmidtResult gram_schmidt(const Vec& y, std::span<const Vec> basis,
                               const OrthoPolicy& policy = {});

/// Number of complex entries a block-growing basis with `columns` columns
/// of n-blocks stores: sum_{j=1..columns} j n.
Index full_basis_storage(Index n, Index columns);

/// Arnoldi factorization B Q_m = Q_{m+1} Hbar_m of the infinite companion
/// operator started from c = -e_1 (x) A(0)^{-1} b.
///
/// The basis is held in one of three forms: explicit block-growing columns
/// (full), columns with p-blocks past the split order (lowrank), or a shared
/// n x r orthonormal factor Z with small per-column coefficient matrices
/// (tensor). The factorization does not depend on mu. It grows one step at
/// a time; all const members may be called concurrently.
class ArnoldiFactorization {
 public:
  ArnoldiFactorization(std::shared_ptr<const TaylorProblem> problem, BasisVariant variant,
                       OrthoPolicy policy = {});

  /// Performs one Arnoldi step. Returns false when the step found the
  /// subspace invariant (lucky breakdown): the step still counts and its
  /// Hessenberg column is kept, but no new basis vector is added. Further
  /// calls do nothing.
  bool step();
  /// Steps until `iterations` steps are done or a breakdown occurs.
  void extend_to(int iterations);
  /// Preallocates the tensor factor for `iterations` steps.
  void reserve(int iterations);

  int iterations() const { return iterations_; }
  bool exact_subspace() const { return breakdown_; }
  BasisVariant variant() const { return variant_; }
  const OrthoPolicy& policy() const { return policy_; }
  const TaylorProblem& problem() const { return *problem_; }
  const std::shared_ptr<const TaylorProblem>& problem_ptr() const { return problem_; }
  BlockLayout layout() const { return layout_; }

  /// ||A(0)^{-1} b||, the right-hand-side norm of the least-squares problem.
  double c_norm() const { return c_norm_; }

  /// Leading (m+1) x m block of Hbar; m defaults to iterations().
  Mat hessenberg(int m = -1) const;

  /// Number of stored basis vectors: iterations()+1, or iterations() after
  /// a breakdown.
  int column_count() const;

  /// Basis vector j (0-based), reconstructed as a block vector with j+1
  /// blocks. Tensor columns are expanded to full n-blocks.
  BlockVector column(int j) const;

  /// Rows 1..n of the first m basis vectors (n x m).
  Mat first_block_rows(int m = -1) const;
  /// Q_m(1:n, :) z without forming the matrix; m = z.size().
  Vec first_block_apply(const Vec& z) const;

  /// Complex entries held by the basis representation.
  Index storage_entries() const;
  /// Rank of the tensor factor Z (0 for the other variants).
  Index tensor_rank() const { return rank_; }

 private:
  void step_ragged();
  void step_tensor();
  void append_hessenberg_column(const Vec& h, double beta);

  std::shared_ptr<const TaylorProblem> problem_;
  const LowRankTaylorProblem* lowrank_ = nullptr;
  BasisVariant variant_;
  OrthoPolicy policy_;
  BlockLayout layout_;
  double c_norm_ = 0.0;
  int iterations_ = 0;
  bool breakdown_ = false;
  Mat hbar_;  // (iterations_+1) x iterations_

  // full / lowrank
  std::vector<Vec> columns_;

  // tensor: block l of column j is z_.leftCols(a.rows()) * a.col(l) with
  // a = coeffs_[j]; first_coeffs_ caches coefficient column 0 of each.
  Mat z_;
  Index rank_ = 0;
  std::vector<Mat> coeffs_;
  Mat first_coeffs_;
};

ArnoldiFactorization arnoldi_build(std::shared_ptr<const TaylorProblem> problem, int max_iters,
                                   BasisVariant variant, const OrthoPolicy& policy = {});

/// Q_m(1:n, :) of a built factorization.
inline Mat basis_first_block(const ArnoldiFactorization& fac, int m = -1) {
  return fac.first_block_rows(m);
}

}  // namespace infgmres
