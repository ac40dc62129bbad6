#include "infgmres/taylor_problem.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace infgmres {

Vec TaylorProblem::weighted_derivative_sum(const Eigen::Ref<const Mat>& blocks) const {
  Vec sum = Vec::Zero(dim());
  const auto degree = polynomial_degree();
  for (Index l = 1; l <= blocks.cols(); ++l) {
    if (degree && l > *degree) break;
    sum += derivative_apply(static_cast<int>(l), blocks.col(l - 1)) / static_cast<double>(l);
  }
  return sum;
}

A0Factorization::A0Factorization(const SpMat& a0) {
  if (a0.rows() != a0.cols()) throw StructuralError("A(0) is not square");
  if (a0.rows() <= dense_limit) {
    DenseLu lu{Mat(a0)};
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", rcond);
      throw ProblemDefinitionError(std::string("A(0) is singular (reciprocal condition estimate ") + buf + ")");
    }
    lu_ = std::move(lu);
  } else {
    auto lu = std::make_shared<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    SpMat compressed = a0;
    compressed.makeCompressed();
    lu->compute(compressed);
    if (lu->info() != Eigen::Success) {
      throw ProblemDefinitionError("A(0) is singular: sparse LU failed (" + lu->lastErrorMessage() +
                                   ")");
    }
    lu_ = std::move(lu);
  }
}

Vec A0Factorization::solve(const Vec& y) const {
  if (const auto* dense = std::get_if<DenseLu>(&lu_)) return dense->solve(y);
  if (const auto* sparse = std::get_if<SparseLu>(&lu_)) return (*sparse)->solve(y);
  throw ProblemDefinitionError("A(0) factorization not initialized");
}

}  // namespace infgmres
