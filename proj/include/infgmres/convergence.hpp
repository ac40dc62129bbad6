#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "infgmres/krylov.hpp"

namespace infgmres {

/// Estimated eigenvalues gamma_i of the companion matrix, sorted by
/// descending modulus, with lambda_i = 1 / gamma_i the matching
/// eigenvalues of the nonlinear problem A(lambda) v = 0.
struct SpectrumEstimate {
  enum class Source { ritz, dense };

  std::vector<Complex> gammas;
  std::vector<Complex> lambdas;
  Source source = Source::dense;
  /// First n-block of each eigenvector (or Ritz vector), column i for gamma_i.
  Mat first_blocks;
};

/// Full spectrum of the explicitly assembled B_N. Refuses (SizeGuardError)
/// when (N+1) n exceeds the dense limit.
SpectrumEstimate spectrum_dense(const TaylorProblem& problem, int N);

/// Eigenvalues of the square m x m part of Hbar, largest `count` kept.
SpectrumEstimate spectrum_ritz(const ArnoldiFactorization& fac, int count);

/// Residual envelope (|mu| |gamma_{j+1}|)^k of the linearized GMRES with j
/// outliers.
struct BoundPrediction {
  Complex mu;
  int j = 0;
  double factor = 0.0;
  /// |gamma_j| > |gamma_{j+1}|; the bound needs strictly dominant outliers.
  bool separated = true;

  double per_k(int k) const;
};

BoundPrediction predict_bound(const SpectrumEstimate& spectrum, Complex mu, int j);

/// Raised when a residual history has no ratio above the stagnation floor.
class UndefinedFactorError : public Error {
 public:
  using Error::Error;
};

/// Ratios r_{k+1}/r_k with r_{k+1} below this fraction of r_0 are roundoff.
inline constexpr double stagnation_fraction = 1e2 * 2.220446049250313e-16;
/// The bound is compared from the first k with r_k < knee_fraction * r_0.
inline constexpr double knee_fraction = 1e-2;

/// max_k r_{k+1} / r_k over k >= first with both values above the
/// stagnation floor 1e2 eps r_0; history[0] is r_0.
double observed_factor(std::span<const double> history, std::size_t first = 0);

/// First index k with history[k] < knee_fraction * history[0], or
/// history.size() when the residual never gets there.
std::size_t knee_index(std::span<const double> history);

/// Singular values of p(A) below this fraction of the largest are treated as
/// zero when the range of p(A) is extracted.
inline constexpr double range_tolerance = 1e-10;

/// ||(A - gamma_1 I) ... (A - gamma_j I) A^k||_2^{1/k} for k = 1..k_max,
/// accumulated with per-step normalization. The powers act on A restricted
/// to the range of p(A), so annihilated directions stay annihilated in
/// floating point.
std::vector<std::pair<int, double>> gelfand_limit_check(const Mat& a, std::span<const Complex> outliers,
                                                        int k_max);

/// A = V diag(spectrum) V^{-1} with V = U_1 S U_2, U_1, U_2 seeded random
/// unitary and S with singular values spaced linearly in [1, kappa].
struct ConstructedMatrix {
  Mat a;
  Mat v;
  std::vector<Complex> spectrum;
  double kappa = 1.0;
};

ConstructedMatrix constructed_matrix(std::vector<Complex> spectrum, double kappa, std::uint64_t seed);

/// Default spectrum for the Gelfand experiment.
std::vector<Complex> default_gelfand_spectrum();

}  // namespace infgmres
