#include "infgmres/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "infgmres/reference.hpp"

namespace infgmres {

namespace {

SpectrumEstimate sorted_estimate(const Vec& values, const Mat& vectors, SpectrumEstimate::Source source,
                                 std::size_t count) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(values(a)), mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    return std::arg(values(a)) > std::arg(values(b));
  });
  count = std::min(count, order.size());

  SpectrumEstimate out;
  out.source = source;
  out.first_blocks.resize(vectors.rows(), static_cast<Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const Complex g = values(order[i]);
    out.gammas.push_back(g);
    out.lambdas.push_back(1.0 / g);
    out.first_blocks.col(static_cast<Index>(i)) = vectors.col(order[i]);
  }
  return out;
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

}  // namespace

SpectrumEstimate spectrum_dense(const TaylorProblem& problem, int N) {
  const Index n = problem.dim();
  if ((N + 1) * n > reference::dense_limit) {
    throw SizeGuardError("dense spectrum of order " + std::to_string((N + 1) * n) +
                         " is too large; use spectrum_ritz on an Arnoldi factorization instead");
  }
  const reference::DenseCompanion companion = reference::assemble_companion(problem, N);
  Eigen::ComplexEigenSolver<Mat> eig(companion.matrix);
  if (eig.info() != Eigen::Success) throw Error("dense eigensolver did not converge");
  const Mat first = eig.eigenvectors().topRows(n);
  return sorted_estimate(eig.eigenvalues(), first, SpectrumEstimate::Source::dense,
                         static_cast<std::size_t>(eig.eigenvalues().size()));
}

SpectrumEstimate spectrum_ritz(const ArnoldiFactorization& fac, int count) {
  const int m = fac.iterations();
  if (count < 1 || count > m) {
    throw RangeError("Ritz extraction of " + std::to_string(count) + " values from " + std::to_string(m) +
                     " Arnoldi steps");
  }
  const Mat h = fac.hessenberg(m).topRows(m);
  Eigen::ComplexEigenSolver<Mat> eig(h);
  if (eig.info() != Eigen::Success) throw Error("Hessenberg eigensolver did not converge");
  const Mat first = fac.first_block_rows(m) * eig.eigenvectors();
  return sorted_estimate(eig.eigenvalues(), first, SpectrumEstimate::Source::ritz,
                         static_cast<std::size_t>(count));
}

double BoundPrediction::per_k(int k) const { return std::pow(factor, k); }

BoundPrediction predict_bound(const SpectrumEstimate& spectrum, Complex mu, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= spectrum.gammas.size()) {
    throw RangeError("outlier count " + std::to_string(j) + " needs at least " + std::to_string(j + 1) +
                     " eigenvalue estimates, have " + std::to_string(spectrum.gammas.size()));
  }
  BoundPrediction out;
  out.mu = mu;
  out.j = j;
  const auto idx = static_cast<std::size_t>(j);
  out.factor = std::abs(mu) * std::abs(spectrum.gammas[idx]);
  out.separated = j == 0 || std::abs(spectrum.gammas[idx - 1]) > std::abs(spectrum.gammas[idx]);
  return out;
}

double observed_factor(std::span<const double> history, std::size_t first) {
  if (history.size() < 2) throw UndefinedFactorError("residual history needs at least two entries");
  const double floor = stagnation_fraction * history[0];
  double rho = -1.0;
  for (std::size_t k = first; k + 1 < history.size(); ++k) {
    if (history[k] <= floor || history[k + 1] <= floor) break;
    rho = std::max(rho, history[k + 1] / history[k]);
  }
  if (rho < 0.0) throw UndefinedFactorError("no residual ratio above the stagnation floor");
  return rho;
}

std::size_t knee_index(std::span<const double> history) {
  if (history.empty()) return 0;
  const double level = knee_fraction * history[0];
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (history[k] < level) return k;
  }
  return history.size();
}

std::vector<std::pair<int, double>> gelfand_limit_check(const Mat& a, std::span<const Complex> outliers,
                                                        int k_max) {
  if (a.rows() != a.cols()) throw StructuralError("Gelfand check needs a square matrix");
  if (k_max < 1) throw RangeError("k_max must be at least 1");
  const Index n = a.rows();

  Mat p = Mat::Identity(n, n);
  for (const Complex& g : outliers) p = p * (a - g * Mat::Identity(n, n));

  // p(A) A^k = W T^k W^H p(A) with W an orthonormal basis of range(p(A)),
  // which is A-invariant, and T = W^H A W.
  Mat t = a;
  Mat x = p;
  if (!outliers.empty()) {
    const Eigen::JacobiSVD<Mat> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVec& sigma = svd.singularValues();
    Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > range_tolerance * sigma(0)) ++rank;
    const Mat w = svd.matrixU().leftCols(rank);
    t = w.adjoint() * a * w;
    x = sigma.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).adjoint();
  }

  double log_scale = 0.0;
  const double first = x.size() == 0 ? 0.0 : x.norm();
  if (first > 0.0) {
    log_scale = std::log(first);
    x /= first;
  }

  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(k_max));
  bool vanished = first == 0.0;
  for (int k = 1; k <= k_max; ++k) {
    if (vanished) {
      out.emplace_back(k, 0.0);
      continue;
    }
    x = t * x;
    const double scale = x.norm();
    if (scale == 0.0) {
      vanished = true;
      out.emplace_back(k, 0.0);
      continue;
    }
    log_scale += std::log(scale);
    x /= scale;
    const double value = std::exp((log_scale + std::log(spectral_norm(x))) / k);
    if (!std::isfinite(value)) {
      throw RangeError("Gelfand sequence overflowed; last representable k is " + std::to_string(k - 1));
    }
    out.emplace_back(k, value);
  }
  return out;
}

ConstructedMatrix constructed_matrix(std::vector<Complex> spectrum, double kappa, std::uint64_t seed) {
  if (spectrum.empty()) throw RangeError("constructed matrix needs a nonempty spectrum");
  if (!(kappa >= 1.0)) throw RangeError("condition number must be at least 1");
  const auto n = static_cast<Index>(spectrum.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto random_unitary = [&] {
    Mat g(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
    }
    return Mat(Eigen::HouseholderQR<Mat>(g).householderQ());
  };

  Vec sigma(n);
  for (Index i = 0; i < n; ++i) {
    sigma(i) = n == 1 ? 1.0 : 1.0 + (kappa - 1.0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  ConstructedMatrix out;
  out.v = random_unitary() * sigma.asDiagonal() * random_unitary();
  Vec d(n);
  for (Index i = 0; i < n; ++i) d(i) = spectrum[static_cast<std::size_t>(i)];
  out.a = out.v * d.asDiagonal() * out.v.inverse();
  out.spectrum = std::move(spectrum);
  out.kappa = n == 1 ? 1.0 : kappa;
  return out;
}

std::vector<Complex> default_gelfand_spectrum() { return {3.0, 2.5, 1.0, 0.5, 0.3, 0.2, 0.1, 0.05}; }

}  // namespace infgmres
