#pragma once

#include <limits>

#include "infgmres/taylor_problem.hpp"

namespace infgmres {

/// Block sizes of a vector with an infinite tail of zeros. Blocks before
/// `split` have length n, later blocks have length p. The full companion
/// form never switches to p-blocks.
struct BlockLayout {
  Index n = 0;
  int split = std::numeric_limits<int>::max();
  Index p = 0;

  static BlockLayout full(Index n) { return {n, std::numeric_limits<int>::max(), n}; }
  static BlockLayout lowrank(Index n, int s, Index p) { return {n, s, p}; }

  bool is_full() const { return split == std::numeric_limits<int>::max(); }
  Index block_size(int block) const { return block < split ? n : p; }

  /// Total length of the leading `blocks` blocks.
  Index offset(int blocks) const {
    if (blocks <= split) return static_cast<Index>(blocks) * n;
    return static_cast<Index>(split) * n + static_cast<Index>(blocks - split) * p;
  }

  bool operator==(const BlockLayout&) const = default;
};

/// vec(X, 0, 0, ...) stored as its nonzero leading blocks.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(BlockLayout layout, int blocks);
  BlockVector(BlockLayout layout, int blocks, Vec data);

  const BlockLayout& layout() const { return layout_; }
  int block_count() const { return blocks_; }
  const Vec& data() const { return data_; }
  Vec& data() { return data_; }

  auto block(int l) { return data_.segment(layout_.offset(l), layout_.block_size(l)); }
  auto block(int l) const { return data_.segment(layout_.offset(l), layout_.block_size(l)); }

  /// Same represented vector with one more explicit zero block.
  BlockVector padded(int extra_blocks = 1) const;

  double norm() const { return data_.norm(); }

 private:
  BlockLayout layout_;
  int blocks_ = 0;
  Vec data_;
};

/// Applies the infinite companion matrix to vec(x_1, ..., x_k, 0, ...):
/// block 1 of the result is -A(0)^{-1} sum_i (1/i) A^(i)(0) x_i and block
/// j+1 is x_j / j. The cost does not depend on any truncation order.
Vec companion_apply(const TaylorProblem& problem, const Eigen::Ref<const Vec>& v, int blocks);
BlockVector companion_apply(const TaylorProblem& problem, const BlockVector& v);

/// Low-rank companion product. The input holds min(k, s) n-blocks followed
/// by max(0, k - s) p-blocks; blocks past s are carried in V^T coordinates.
/// For k < s this coincides with companion_apply.
Vec companion_apply_lowrank(const LowRankTaylorProblem& problem, const Eigen::Ref<const Vec>& v,
                            int blocks);
BlockVector companion_apply_lowrank(const LowRankTaylorProblem& problem, const BlockVector& v);

/// ||A(mu) x - b|| / ||b|| with the exact A(mu).
double residual_true(const TaylorProblem& problem, Complex mu, const Vec& x);

}  // namespace infgmres
