#include "infgmres/krylov.hpp"

#include <algorithm>
#include <string>

#include "infgmres/kernels.hpp"

namespace infgmres {

std::string_view to_string(BasisVariant variant) {
  switch (variant) {
    case BasisVariant::full: return "full";
    case BasisVariant::lowrank: return "lowrank";
    case BasisVariant::tensor: return "tensor";
  }
  return "?";
}

BasisVariant parse_variant(std::string_view name) {
  if (name == "full") return BasisVariant::full;
  if (name == "lowrank") return BasisVariant::lowrank;
  if (name == "tensor") return BasisVariant::tensor;
  throw RangeError("unknown basis variant '" + std::string(name) + "'");
}

Index full_basis_storage(Index n, Index columns) { return n * columns * (columns + 1) / 2; }

namespace {

// Shared driver for ragged vectors and coefficient matrices. Leaves y_perp
// (unnormalized) in y.
template <class V, class B>
GramSchmidtResult orthogonalize(V& y, std::span<const B> basis, const OrthoPolicy& policy) {
  GramSchmidtResult out;
  const double norm0 = y.norm();
  Vec h;
  kernels::project(basis, y, h);
  kernels::subtract(basis, h, y);
  out.h = h;
  out.passes = 1;

  const bool second = policy.kind == OrthoPolicy::Kind::classical_twice ||
                      y.norm() < policy.reorth_threshold * norm0;
  if (second) {
    kernels::project(basis, y, h);
    kernels::subtract(basis, h, y);
    out.h += h;
    out.passes = 2;
  }

  out.beta = y.norm();
  if (!(out.beta > policy.breakdown_tol * norm0)) out.beta = 0.0;
  return out;
}

}  // namespace

GramSchmidtResult gram_schmidt(const Vec& y, std::span<const Vec> basis,
                               const OrthoPolicy& policy) {
  for (const auto& q : basis) {
    if (q.size() > y.size()) throw StructuralError("basis column longer than the vector");
  }
  Vec work = y;
  GramSchmidtResult out = orthogonalize(work, basis, policy);
  if (out.beta > 0.0) out.q_new = work / out.beta;
  return out;
}

ArnoldiFactorization::ArnoldiFactorization(std::shared_ptr<const TaylorProblem> problem,
                                           BasisVariant variant, OrthoPolicy policy)
    : problem_(std::move(problem)), variant_(variant), policy_(policy) {
  if (!problem_) throw StructuralError("null problem");
  const Index n = problem_->dim();
  if (problem_->rhs().size() != n) throw StructuralError("rhs length differs from problem dimension");

  layout_ = BlockLayout::full(n);
  if (variant_ == BasisVariant::lowrank) {
    lowrank_ = dynamic_cast<const LowRankTaylorProblem*>(problem_.get());
    if (!lowrank_) {
      throw ProblemDefinitionError("low-rank basis requested for a problem without a low-rank tail");
    }
    layout_ = BlockLayout::lowrank(n, lowrank_->split_order(), lowrank_->rank());
  }

  const Vec c_hat = -problem_->solve_a0(problem_->rhs());
  c_norm_ = c_hat.norm();
  if (!(c_norm_ > 0.0)) throw EmptyKrylovError("A(0)^{-1} b vanishes; the Krylov space is empty");

  hbar_ = Mat::Zero(1, 0);
  if (variant_ == BasisVariant::tensor) {
    z_ = Mat(n, 4);
    z_.col(0) = c_hat / c_norm_;
    rank_ = 1;
    coeffs_.push_back(Mat::Ones(1, 1));
    first_coeffs_ = Mat::Ones(1, 1);
  } else {
    columns_.push_back(c_hat / c_norm_);
  }
}

void ArnoldiFactorization::append_hessenberg_column(const Vec& h, double beta) {
  const int m = iterations_ + 1;
  hbar_.conservativeResize(m + 1, m);
  hbar_.row(m).setZero();
  hbar_.col(m - 1).setZero();
  hbar_.col(m - 1).head(h.size()) = h;
  hbar_(m, m - 1) = beta;
}

bool ArnoldiFactorization::step() {
  if (breakdown_) return false;
  if (variant_ == BasisVariant::tensor) {
    step_tensor();
  } else {
    step_ragged();
  }
  return !breakdown_;
}

void ArnoldiFactorization::extend_to(int iterations) {
  while (iterations_ < iterations && step()) {
  }
}

void ArnoldiFactorization::reserve(int iterations) {
  if (variant_ == BasisVariant::tensor && iterations + 1 > z_.cols()) {
    z_.conservativeResize(Eigen::NoChange, iterations + 1);
  }
  if (variant_ != BasisVariant::tensor) columns_.reserve(static_cast<std::size_t>(iterations) + 1);
}

void ArnoldiFactorization::step_ragged() {
  const int m = iterations_ + 1;  // q_m has m blocks
  const Vec& q = columns_.back();
  Vec y = lowrank_ ? companion_apply_lowrank(*lowrank_, q, m) : companion_apply(*problem_, q, m);

  const GramSchmidtResult gs = orthogonalize(y, std::span<const Vec>(columns_), policy_);
  append_hessenberg_column(gs.h, gs.beta);
  ++iterations_;
  if (gs.beta == 0.0) {
    breakdown_ = true;
    return;
  }
  columns_.push_back(y / gs.beta);
}

void ArnoldiFactorization::step_tensor() {
  const Index n = problem_->dim();
  const Mat& a = coeffs_.back();  // r_k x k
  const Index k = a.cols();

  Index used = k;
  if (const auto degree = problem_->polynomial_degree()) used = std::min<Index>(k, *degree);
  Vec x_tilde = Vec::Zero(n);
  if (used > 0) {
    const Mat w = z_.leftCols(a.rows()) * a.leftCols(used);
    x_tilde = -problem_->solve_a0(problem_->weighted_derivative_sum(w));
  }

  // Extend Z with the part of x_tilde outside its range (two CGS passes).
  const double x_norm = x_tilde.norm();
  Vec t = Vec::Zero(rank_);
  for (int pass = 0; pass < 2; ++pass) {
    const Vec dt = z_.leftCols(rank_).adjoint() * x_tilde;
    x_tilde.noalias() -= z_.leftCols(rank_) * dt;
    t += dt;
  }
  const double zeta = x_tilde.norm();
  const bool grow = zeta > policy_.breakdown_tol * x_norm && zeta > 0.0;
  if (grow) {
    if (rank_ == z_.cols()) z_.conservativeResize(Eigen::NoChange, 2 * z_.cols());
    z_.col(rank_) = x_tilde / zeta;
    ++rank_;
  }

  // Coefficients of y = vec(x_tilde, x_1/1, ..., x_k/k) in terms of Z.
  Mat y = Mat::Zero(rank_, k + 1);
  y.col(0).head(t.size()) = t;
  if (grow) y(rank_ - 1, 0) = zeta;
  for (Index l = 0; l < k; ++l) {
    y.col(l + 1).head(a.rows()) = a.col(l) / static_cast<double>(l + 1);
  }

  const GramSchmidtResult gs = orthogonalize(y, std::span<const Mat>(coeffs_), policy_);
  append_hessenberg_column(gs.h, gs.beta);
  ++iterations_;
  if (gs.beta == 0.0) {
    breakdown_ = true;
    return;
  }
  y /= gs.beta;

  const Index cols = first_coeffs_.cols();
  const Index old_rows = first_coeffs_.rows();
  first_coeffs_.conservativeResize(rank_, cols + 1);
  first_coeffs_.bottomRows(rank_ - old_rows).setZero();
  first_coeffs_.col(cols) = y.col(0);
  coeffs_.push_back(std::move(y));
}

Mat ArnoldiFactorization::hessenberg(int m) const {
  if (m < 0) m = iterations_;
  if (m > iterations_) throw RangeError("requested more Hessenberg columns than iterations");
  return hbar_.topLeftCorner(m + 1, m);
}

int ArnoldiFactorization::column_count() const {
  return variant_ == BasisVariant::tensor ? static_cast<int>(coeffs_.size())
                                          : static_cast<int>(columns_.size());
}

BlockVector ArnoldiFactorization::column(int j) const {
  if (j < 0 || j >= column_count()) throw RangeError("basis column index out of range");
  if (variant_ != BasisVariant::tensor) return {layout_, j + 1, columns_[static_cast<std::size_t>(j)]};

  const Mat& a = coeffs_[static_cast<std::size_t>(j)];
  const Mat blocks = z_.leftCols(a.rows()) * a;
  return {layout_, j + 1, Eigen::Map<const Vec>(blocks.data(), blocks.size())};
}

Mat ArnoldiFactorization::first_block_rows(int m) const {
  if (m < 0) m = iterations_;
  if (m > column_count()) throw RangeError("requested more basis columns than stored");
  const Index n = problem_->dim();
  if (variant_ == BasisVariant::tensor) {
    return z_.leftCols(first_coeffs_.rows()) * first_coeffs_.leftCols(m);
  }
  Mat out(n, m);
  for (int j = 0; j < m; ++j) out.col(j) = columns_[static_cast<std::size_t>(j)].head(n);
  return out;
}

Vec ArnoldiFactorization::first_block_apply(const Vec& z) const {
  const auto m = static_cast<int>(z.size());
  if (m > column_count()) throw RangeError("coefficient vector longer than the basis");
  const Index n = problem_->dim();
  if (variant_ == BasisVariant::tensor) {
    const Vec small = first_coeffs_.leftCols(m) * z;
    return z_.leftCols(first_coeffs_.rows()) * small;
  }
  Vec out = Vec::Zero(n);
  for (int j = 0; j < m; ++j) out.noalias() += z(j) * columns_[static_cast<std::size_t>(j)].head(n);
  return out;
}

Index ArnoldiFactorization::storage_entries() const {
  Index total = 0;
  if (variant_ == BasisVariant::tensor) {
    total = problem_->dim() * rank_;
    for (const auto& a : coeffs_) total += a.size();
  } else {
    for (const auto& q : columns_) total += q.size();
  }
  return total;
}

ArnoldiFactorization arnoldi_build(std::shared_ptr<const TaylorProblem> problem, int max_iters,
                                   BasisVariant variant, const OrthoPolicy& policy) {
  if (max_iters < 1) throw RangeError("max_iters must be at least 1");
  ArnoldiFactorization fac(std::move(problem), variant, policy);
  fac.reserve(max_iters);
  fac.extend_to(max_iters);
  return fac;
}

}  // namespace infgmres
