#include <gtest/gtest.h>

#include <random>

#include "infgmres/reference.hpp"
#include "infgmres/solver.hpp"
#include "support.hpp"

namespace infgmres {
namespace {

using test::rel_diff;

std::shared_ptr<const ArnoldiFactorization> built(std::shared_ptr<const TaylorProblem> problem, int m,
                                                  BasisVariant variant = BasisVariant::full) {
  return std::make_shared<const ArnoldiFactorization>(arnoldi_build(std::move(problem), m, variant));
}

TEST(Evaluate, ToyProblemConvergesToScaledRhs) {
  const auto problem = test::toy_problem();
  const auto fac = built(problem, 60);
  const Evaluation e = evaluate(*fac, 0.5);
  const Vec expected = Vec::Unit(2, 0) * 2.0;
  EXPECT_LT((e.x - expected).norm(), 1e-12);
}

TEST(Evaluate, ToyProblemAtTwoStepsMatchesDenseGmres) {
  // Two steps do not reach the exact solution: the infinite companion form
  // of (1 - mu) I keeps a nonzero tail. The value is fixed by GMRES on the
  // explicit companion matrix.
  const auto problem = test::toy_problem();
  const auto fac = built(problem, 2);
  const Complex mu = 0.5;
  const auto dense = reference::assemble_companion(*problem, 5);
  Mat shifted = mu * dense.matrix - Mat::Identity(12, 12);
  const auto gmres = reference::reference_gmres(shifted, reference::linearized_rhs(*problem, 12), 2);
  const Evaluation e = evaluate(*fac, mu, 2);
  EXPECT_LT(rel_diff(e.x, gmres.iterates[1].head(2)), 1e-14);
  EXPECT_GT((e.x - Vec::Unit(2, 0) * 2.0).norm(), 0.1);
}

TEST(Evaluate, ZeroMuIsExactSolveOfA0) {
  const auto problem = build_delay(30);
  const auto fac = built(problem, 3);
  const Evaluation e = evaluate(*fac, 0.0);
  EXPECT_EQ(e.x, problem->solve_a0(problem->rhs()));
  EXPECT_EQ(e.ls_residual, 0.0);
}

TEST(Evaluate, SmallDelayMatchesDirectSolve) {
  const auto problem = build_delay(8);
  const auto fac = built(problem, 8);
  const Evaluation e = evaluate(*fac, 0.05);
  const Vec direct = reference::direct_solve(*problem, 0.05);
  EXPECT_LE(rel_diff(e.x, direct), 1e-8);
}

TEST(Evaluate, RejectsBadBudgets) {
  const auto fac = built(build_delay(8), 4);
  EXPECT_THROW(evaluate(*fac, 0.1, 5), RangeError);
  EXPECT_THROW(evaluate(*fac, 0.1, 0), RangeError);
}

TEST(Evaluate, LeastSquaresResidualIsOptimal) {
  const auto fac = built(build_delay(50), 12);
  std::mt19937_64 rng(3);
  for (Complex mu : {Complex(0.05), Complex(0.2, 0.1), Complex(-0.3)}) {
    const Mat h = fac->hessenberg();
    const auto ls = solve_shifted_least_squares(h, mu, fac->c_norm());
    Mat shifted = mu * h;
    shifted.diagonal().array() -= 1.0;
    Vec rhs = Vec::Zero(h.rows());
    rhs(0) = fac->c_norm();
    EXPECT_NEAR((shifted * ls.z - rhs).norm(), ls.residual, 1e-14 * fac->c_norm());
    for (int trial = 0; trial < 20; ++trial) {
      Vec delta = test::random_vector(rng, h.cols());
      delta *= 1e-6 / delta.norm();
      EXPECT_GE((shifted * (ls.z + delta) - rhs).norm(), ls.residual - 1e-15 * fac->c_norm());
    }
  }
}

TEST(Evaluate, RankDeficientShiftReturnsMinimumNorm) {
  Mat hbar(2, 1);
  hbar << 1.0, 0.0;
  const auto ls = solve_shifted_least_squares(hbar, 1.0, 2.0);
  EXPECT_TRUE(ls.rank_deficient);
  EXPECT_EQ(ls.z.norm(), 0.0);
  EXPECT_DOUBLE_EQ(ls.residual, 2.0);
  EXPECT_THROW(solve_shifted_least_squares(Mat::Zero(3, 1), 1.0, 1.0), StructuralError);
}

TEST(Evaluate, LeastSquaresResidualIsMonotoneInM) {
  const std::vector<std::shared_ptr<const TaylorProblem>> problems{build_delay(100), build_helmholtz1d(200)};
  for (const auto& problem : problems) {
    const auto fac = built(problem, 60);
    for (Complex mu : {Complex(0.01), Complex(0.1), Complex(0.2), Complex(0.1, 0.3), Complex(1.6)}) {
      double previous = fac->c_norm();
      for (int m = 1; m <= 60; ++m) {
        const double r = evaluate(*fac, mu, m).ls_residual / fac->c_norm();
        EXPECT_LE(r, previous + 1e-13) << "mu " << mu << " m " << m;
        previous = r;
      }
    }
  }
}

TEST(Evaluate, AgreesWithDenseTruncatedSystem) {
  // Polynomial problems of degree d are reproduced exactly by B_{d-1}.
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const int degree = 1 + trial;
    const auto problem = test::random_polynomial(4, degree, rng(), 0.2);
    const auto dense = reference::assemble_companion(*problem, degree - 1);
    const Index size = dense.matrix.rows();
    const auto fac = built(problem, 80);
    for (Complex mu : {Complex(0.1), Complex(0, 0.5), Complex(-0.3)}) {
      const Mat shifted = mu * dense.matrix - Mat::Identity(size, size);
      const Vec v = shifted.partialPivLu().solve(reference::linearized_rhs(*problem, size));
      EXPECT_LT(rel_diff(evaluate(*fac, mu).x, v.head(4)), 1e-10) << "degree " << degree << " mu " << mu;
    }
  }
}

TEST(ParamSolution, EvaluationsAreReproducible) {
  const ParamSolution solution(built(build_helmholtz1d(100), 20, BasisVariant::lowrank));
  const Evaluation a = solution.evaluate(1.6);
  const Evaluation b = solution.evaluate(1.6);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.ls_residual, b.ls_residual);
  EXPECT_EQ(solution.factorization().iterations(), 20);
}

TEST(Sweep, SingleMuMatchesEvaluateAtStoppingStep) {
  const auto problem = build_delay(100);
  const std::vector<Complex> mus{0.1};
  const SweepResult r = sweep(problem, mus);
  ASSERT_TRUE(r.all_converged());
  const auto fac = built(problem, r.iterations[0]);
  const Evaluation e = evaluate(*fac, 0.1);
  EXPECT_EQ(r.solutions[0], e.x);
  EXPECT_EQ(r.ls_residuals[0], e.ls_residual);
  EXPECT_LE(r.true_residuals[0], 1e-12);
  EXPECT_EQ(r.iterations_used, r.iterations[0]);
}

TEST(Sweep, IterationsGrowWithMu) {
  const std::vector<Complex> mus{0.01, 0.1};
  const SweepResult r = sweep(build_delay(100), mus);
  ASSERT_TRUE(r.all_converged());
  EXPECT_LE(r.iterations[0], r.iterations[1]);
  EXPECT_EQ(r.iterations_used, r.iterations[1]);
}

TEST(Sweep, ZeroMuIsSolvedDirectly) {
  const auto problem = build_delay(50);
  const std::vector<Complex> mus{0.0, 0.1};
  const SweepResult r = sweep(problem, mus);
  EXPECT_EQ(r.iterations[0], 0);
  EXPECT_TRUE(r.converged[0]);
  EXPECT_EQ(r.solutions[0], problem->solve_a0(problem->rhs()));
  EXPECT_GT(r.iterations[1], 0);
}

TEST(Sweep, NonConvergenceIsReportedNotThrown) {
  SweepOptions options;
  options.max_iters = 3;
  const std::vector<Complex> mus{0.05, 0.2};
  const SweepResult r = sweep(build_delay(100), mus, options);
  EXPECT_FALSE(r.all_converged());
  EXPECT_EQ(r.iterations_used, 3);
  EXPECT_EQ(r.solutions.size(), 2u);
  EXPECT_EQ(r.true_residuals.size(), 2u);
}

TEST(Sweep, HistoriesSpanAllIterations) {
  SweepOptions options;
  options.record_history = true;
  const std::vector<Complex> mus{0.01, 0.2};
  const SweepResult r = sweep(build_delay(100), mus, options);
  ASSERT_TRUE(r.all_converged());
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(r.true_history[i].size(), static_cast<std::size_t>(r.iterations_used));
    EXPECT_EQ(r.true_history[i][static_cast<std::size_t>(r.iterations[i] - 1)], r.true_residuals[i]);
  }
  EXPECT_LT(r.iterations[0], r.iterations[1]);
}

TEST(Sweep, VariantsAgree) {
  const auto problem = build_helmholtz1d(200);
  const std::vector<Complex> mus{0.5, 1.6};
  SweepOptions options;
  options.tol = 1e-9;
  std::vector<SweepResult> results;
  for (auto variant : {BasisVariant::full, BasisVariant::lowrank, BasisVariant::tensor}) {
    options.variant = variant;
    results.push_back(sweep(problem, mus, options));
    ASSERT_TRUE(results.back().all_converged()) << to_string(variant);
  }
  for (std::size_t i = 0; i < mus.size(); ++i) {
    EXPECT_LT(rel_diff(results[0].solutions[i], results[1].solutions[i]), 1e-7);
    EXPECT_LT(rel_diff(results[0].solutions[i], results[2].solutions[i]), 1e-7);
  }
}

TEST(Sweep, RejectsBadOptions) {
  const std::vector<Complex> none;
  EXPECT_THROW(sweep(build_delay(10), none), RangeError);
  SweepOptions options;
  options.tol = 0.0;
  const std::vector<Complex> one{0.1};
  EXPECT_THROW(sweep(build_delay(10), one, options), RangeError);
}

}  // namespace
}  // namespace infgmres
