#include "infgmres/linearization.hpp"

#include <string>

namespace infgmres {

BlockVector::BlockVector(BlockLayout layout, int blocks)
    : layout_(layout), blocks_(blocks), data_(Vec::Zero(layout.offset(blocks))) {}

BlockVector::BlockVector(BlockLayout layout, int blocks, Vec data)
    : layout_(layout), blocks_(blocks), data_(std::move(data)) {
  if (data_.size() != layout_.offset(blocks_)) {
    throw StructuralError("block vector of length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(blocks_) + " blocks (expected " +
                          std::to_string(layout_.offset(blocks_)) + ")");
  }
}

BlockVector BlockVector::padded(int extra_blocks) const {
  BlockVector out(layout_, blocks_ + extra_blocks);
  out.data_.head(data_.size()) = data_;
  return out;
}

namespace {

void check_length(const BlockLayout& layout, Index length, int blocks) {
  if (blocks < 1) throw StructuralError("companion product needs at least one block");
  if (length != layout.offset(blocks)) {
    throw StructuralError("vector of length " + std::to_string(length) + " is not " +
                          std::to_string(blocks) + " blocks of the expected sizes");
  }
}

}  // namespace

Vec companion_apply(const TaylorProblem& problem, const Eigen::Ref<const Vec>& v, int blocks) {
  const Index n = problem.dim();
  check_length(BlockLayout::full(n), v.size(), blocks);

  Eigen::Map<const Mat> x(v.data(), n, blocks);
  Vec out(n * (blocks + 1));
  out.head(n) = -problem.solve_a0(problem.weighted_derivative_sum(x));
  for (int j = 1; j <= blocks; ++j) {
    out.segment(j * n, n) = x.col(j - 1) / static_cast<double>(j);
  }
  return out;
}

BlockVector companion_apply(const TaylorProblem& problem, const BlockVector& v) {
  if (!v.layout().is_full() || v.layout().n != problem.dim()) {
    throw StructuralError("companion_apply expects full n-blocks of the problem dimension");
  }
  return {v.layout(), v.block_count() + 1, companion_apply(problem, v.data(), v.block_count())};
}

Vec companion_apply_lowrank(const LowRankTaylorProblem& problem, const Eigen::Ref<const Vec>& v,
                            int blocks) {
  const Index n = problem.dim();
  const int s = problem.split_order();
  const Index p = problem.rank();
  const BlockLayout layout = BlockLayout::lowrank(n, s, p);
  check_length(layout, v.size(), blocks);

  if (blocks < s) return companion_apply(problem, v, blocks);

  // blocks >= s: x_1..x_s are n-blocks, x_{s+1}..x_k are p-blocks.
  Eigen::Map<const Mat> head(v.data(), n, s);
  Vec sum = problem.weighted_derivative_sum(head);
  for (int i = s + 1; i <= blocks; ++i) {
    const Index off = layout.offset(i - 1);
    sum += problem.lowrank_apply(i, v.segment(off, p)) / static_cast<double>(i);
  }

  Vec out(layout.offset(blocks + 1));
  out.head(n) = -problem.solve_a0(sum);
  for (int j = 1; j < s; ++j) {
    out.segment(j * n, n) = head.col(j - 1) / static_cast<double>(j);
  }
  out.segment(layout.offset(s), p) = problem.vt_apply(head.col(s - 1)) / static_cast<double>(s);
  for (int i = s + 1; i <= blocks; ++i) {
    out.segment(layout.offset(i), p) = v.segment(layout.offset(i - 1), p) / static_cast<double>(i);
  }
  return out;
}

BlockVector companion_apply_lowrank(const LowRankTaylorProblem& problem, const BlockVector& v) {
  const BlockLayout expected =
      BlockLayout::lowrank(problem.dim(), problem.split_order(), problem.rank());
  if (!(v.layout() == expected)) {
    throw StructuralError("block pattern does not match (n, s, p) of the low-rank problem");
  }
  return {expected, v.block_count() + 1,
          companion_apply_lowrank(problem, v.data(), v.block_count())};
}

double residual_true(const TaylorProblem& problem, Complex mu, const Vec& x) {
  if (x.size() != problem.dim()) throw StructuralError("solution length differs from problem dimension");
  const Vec& b = problem.rhs();
  return (problem.evaluate_apply(mu, x) - b).norm() / b.norm();
}

}  // namespace infgmres
