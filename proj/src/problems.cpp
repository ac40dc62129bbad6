#include "infgmres/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include <json.hpp>

#include "infgmres/matrix_market.hpp"

namespace infgmres {

namespace {

SpMat identity(Index n) {
  SpMat eye(n, n);
  eye.setIdentity();
  return eye;
}

void require_square(const SpMat& m, Index n, const std::string& what) {
  if (m.rows() != n || m.cols() != n) {
    throw ProblemDefinitionError(what + " is " + std::to_string(m.rows()) + " x " +
                                 std::to_string(m.cols()) + ", expected " + std::to_string(n) +
                                 " x " + std::to_string(n));
  }
}

// mu^i / i! for i = 0..count-1, built by recurrence so large i stays finite.
std::vector<Complex> taylor_weights(Complex mu, std::size_t count) {
  std::vector<Complex> w(count);
  Complex acc = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    w[i] = acc;
    acc *= mu / static_cast<double>(i + 1);
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------- delay

DelayProblem::DelayProblem(SpMat a0, SpMat a1, Vec b) : a0_(std::move(a0)), a1_(std::move(a1)), b_(std::move(b)) {
  const Index n = a0_.rows();
  require_square(a0_, n, "A0");
  require_square(a1_, n, "A1");
  if (b_.size() != n) throw ProblemDefinitionError("delay rhs length differs from A0");
  a0_.makeCompressed();
  a1_.makeCompressed();
  lu_ = A0Factorization(SpMat(a0_ + a1_));
}

Vec DelayProblem::derivative_apply(int order, const Vec& y) const {
  if (order < 0) throw RangeError("negative derivative order");
  if (order == 0) return a0_ * y + a1_ * y;
  if (order == 1) return -y - a1_ * y;
  return (order % 2 == 0 ? 1.0 : -1.0) * (a1_ * y);
}

Vec DelayProblem::evaluate_apply(Complex mu, const Vec& y) const {
  return -mu * y + a0_ * y + std::exp(-mu) * (a1_ * y);
}

SpMat DelayProblem::assemble(Complex mu) const {
  return SpMat(-mu * identity(dim()) + a0_ + std::exp(-mu) * a1_);
}

Vec DelayProblem::weighted_derivative_sum(const Eigen::Ref<const Mat>& blocks) const {
  // A'(0) = -I - A1 and A^(l)(0) = (-1)^l A1 for l >= 2, so the sum is
  // -x_1 + A1 sum_l (-1)^l / l x_l.
  Vec combined = Vec::Zero(dim());
  for (Index l = 1; l <= blocks.cols(); ++l) {
    combined += ((l % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(l) * blocks.col(l - 1);
  }
  Vec out = a1_ * combined;
  if (blocks.cols() > 0) out -= blocks.col(0);
  return out;
}

std::shared_ptr<DelayProblem> build_delay(Index n, const DelayGenerator& generator, Vec b) {
  if (n < 1) throw RangeError("delay problem needs n >= 1");
  std::mt19937_64 rng(generator.seed);
  std::normal_distribution<double> normal;
  const Index per_row = std::clamp<Index>(static_cast<Index>(std::lround(generator.nonzeros_per_row)), 1, n);

  auto random_sparse = [&] {
    std::vector<Eigen::Triplet<Complex>> triplets;
    std::uniform_int_distribution<Index> column(0, n - 1);
    for (Index i = 0; i < n; ++i) {
      std::set<Index> cols;
      while (static_cast<Index>(cols.size()) < per_row) cols.insert(column(rng));
      for (Index j : cols) triplets.emplace_back(i, j, Complex(normal(rng), 0.0));
    }
    SpMat r(n, n);
    r.setFromTriplets(triplets.begin(), triplets.end());

    // 2-norm by power iteration on R^H R.
    Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
    double sigma = 0.0;
    for (int it = 0; it < 100; ++it) {
      Vec w = r.adjoint() * (r * v);
      const double nw = w.norm();
      if (nw == 0.0) break;
      sigma = std::sqrt(nw);
      v = w / nw;
    }
    if (sigma > 0.0) r /= sigma;
    return r;
  };

  SpMat r0 = random_sparse();
  SpMat r1 = random_sparse();
  SpMat a0 = generator.shift * identity(n) + generator.a0_scale * r0;
  SpMat a1 = generator.a1_scale * r1;
  if (b.size() == 0) b = Vec::Ones(n);
  return std::make_shared<DelayProblem>(std::move(a0), std::move(a1), std::move(b));
}

// ------------------------------------------------------------ helmholtz

namespace {

constexpr double robin_length = Helmholtz1DProblem::exterior_end - Helmholtz1DProblem::domain_end;

// cos(base + order * pi / 2) without rounding in the quarter turns.
double quarter_turn_cos(double base, int order) {
  switch (order % 4) {
    case 0: return std::cos(base);
    case 1: return -std::sin(base);
    case 2: return -std::cos(base);
    default: return std::sin(base);
  }
}

}  // namespace

double Helmholtz1DProblem::k_of(double x) {
  constexpr double b = domain_end;
  const double wave = std::sin(alpha * std::numbers::pi * x / b);
  if (x < b / 2) return 5.0 + 10.0 * x / b * wave;
  if (x < b) return 5.0 + 10.0 * (1.0 - x / b) * wave;
  return k_exterior;
}

double Helmholtz1DProblem::beta_of(double x) {
  constexpr double a = 0.0, b = domain_end;
  return x < b ? std::sin((x - a) / (b - a) * 2.0 * std::numbers::pi) : 0.0;
}

double Helmholtz1DProblem::h_of(double x) {
  constexpr double a = 0.0, b = domain_end;
  return x < b ? (x - b) * (x - b) / ((a - b) * (a - b)) : 0.0;
}

Complex Helmholtz1DProblem::g(Complex mu) { return std::cos(robin_length * (1.0 + k_exterior * mu)); }

Complex Helmholtz1DProblem::f(Complex mu) {
  const Complex t = 1.0 + k_exterior * mu;
  if (std::abs(t) < 1e-8) return robin_length * (1.0 - robin_length * robin_length * t * t / 6.0);
  return std::sin(robin_length * t) / t;
}

double Helmholtz1DProblem::g_derivative(int order) {
  // g(mu) = cos(L + L k0 mu)
  return std::pow(robin_length * k_exterior, order) * quarter_turn_cos(robin_length, order);
}

double Helmholtz1DProblem::f_derivative(int order) {
  // With t = 1 + k0 mu, sin(L t) / t = L int_0^1 cos(L t s) ds, so
  //   d^i/dt^i at t = 1 equals L^{i+1} int_0^1 s^i cos(L s + i pi/2) ds
  //   = L^{i+1} sum_q cos((i+q) pi/2) L^q / (q! (i+q+1)).
  // Every term is positive-weighted and small, so the series is stable
  // for all orders.
  double sum = 0.0;
  double power = 1.0;  // L^q / q!
  for (int q = 0; q < 200; ++q) {
    const double term = quarter_turn_cos(0.0, order + q) * power / static_cast<double>(order + q + 1);
    sum += term;
    power *= robin_length / static_cast<double>(q + 1);
    if (power < 1e-20 * std::abs(sum) && q > 2) break;
  }
  return std::pow(k_exterior, order) * std::pow(robin_length, order + 1) * sum;
}

Helmholtz1DProblem::Helmholtz1DProblem(Index n) : n_(n), dx_(domain_end / static_cast<double>(n)) {
  if (n < 4) throw RangeError("Helmholtz discretization needs n >= 4");
  k_ = RealVec::Zero(n);
  beta_ = RealVec::Zero(n);
  h_ = Vec::Zero(n);

  const double inv_dx2 = 1.0 / (dx_ * dx_);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(3 * n));
  for (Index i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1) * dx_;
    h_(i) = h_of(x);
    if (i == n - 1) break;  // boundary row belongs to the low-rank part
    k_(i) = k_of(x);
    beta_(i) = beta_of(x);
    if (i > 0) triplets.emplace_back(i, i - 1, inv_dx2);
    triplets.emplace_back(i, i, -2.0 * inv_dx2 + 1.0 + beta_(i));
    triplets.emplace_back(i, i + 1, inv_dx2);
  }
  h_(n - 1) = 0.0;
  interior_.resize(n, n);
  interior_.setFromTriplets(triplets.begin(), triplets.end());
  interior_.makeCompressed();
  lu_ = A0Factorization(assemble(0.0));
}

Vec Helmholtz1DProblem::vt_apply(const Vec& y) const {
  Vec out(2);
  out(0) = y(n_ - 1);
  out(1) = (1.5 * y(n_ - 1) - 2.0 * y(n_ - 2) + 0.5 * y(n_ - 3)) / dx_;
  return out;
}

Vec Helmholtz1DProblem::lowrank_apply(int order, const Vec& z) const {
  Vec out = Vec::Zero(n_);
  out(n_ - 1) = g_derivative(order) * z(0) + f_derivative(order) * z(1);
  return out;
}

Vec Helmholtz1DProblem::derivative_apply(int order, const Vec& y) const {
  if (order < 0) throw RangeError("negative derivative order");
  Vec out = lowrank_apply(order, vt_apply(y));
  switch (order) {
    case 0: out += interior_ * y; break;
    case 1: out.array() += 2.0 * k_.array() * y.array(); break;
    case 2: out.array() += 2.0 * k_.array().square() * y.array(); break;
    default: break;
  }
  return out;
}

Vec Helmholtz1DProblem::evaluate_apply(Complex mu, const Vec& y) const {
  Vec out = interior_ * y;
  out.array() += (2.0 * mu * k_.array() + mu * mu * k_.array().square()) * y.array();
  const Vec w = vt_apply(y);
  out(n_ - 1) += g(mu) * w(0) + f(mu) * w(1);
  return out;
}

SpMat Helmholtz1DProblem::assemble(Complex mu) const {
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Index i = 0; i + 1 < n_; ++i) {
    triplets.emplace_back(i, i, 2.0 * mu * k_(i) + mu * mu * k_(i) * k_(i));
  }
  const Complex gm = g(mu), fm = f(mu);
  triplets.emplace_back(n_ - 1, n_ - 1, gm + 1.5 * fm / dx_);
  triplets.emplace_back(n_ - 1, n_ - 2, -2.0 * fm / dx_);
  triplets.emplace_back(n_ - 1, n_ - 3, 0.5 * fm / dx_);
  SpMat extra(n_, n_);
  extra.setFromTriplets(triplets.begin(), triplets.end());
  SpMat out = interior_ + extra;
  out.makeCompressed();
  return out;
}

std::shared_ptr<Helmholtz1DProblem> build_helmholtz1d(Index n) {
  return std::make_shared<Helmholtz1DProblem>(n);
}

// -------------------------------------------------------------- generic

GenericProblem::GenericProblem(std::vector<SpMat> coefficients, Vec rhs, bool polynomial)
    : coefficients_(std::move(coefficients)), rhs_(std::move(rhs)), polynomial_(polynomial) {
  if (coefficients_.empty()) throw ProblemDefinitionError("no coefficient matrices given");
  const Index n = rhs_.size();
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    require_square(coefficients_[i], n, "coefficient A_" + std::to_string(i));
    coefficients_[i].makeCompressed();
  }
  lu_ = A0Factorization(coefficients_[0]);
}

Vec GenericProblem::derivative_apply(int order, const Vec& y) const {
  if (order < 0) throw RangeError("negative derivative order");
  if (static_cast<std::size_t>(order) < coefficients_.size()) {
    return coefficients_[static_cast<std::size_t>(order)] * y;
  }
  if (polynomial_) return Vec::Zero(dim());
  throw ProblemDefinitionError("derivative of order " + std::to_string(order) +
                               " requested but only orders 0.." +
                               std::to_string(coefficients_.size() - 1) + " are defined");
}

Vec GenericProblem::evaluate_apply(Complex mu, const Vec& y) const {
  const auto w = taylor_weights(mu, coefficients_.size());
  Vec out = Vec::Zero(dim());
  for (std::size_t i = 0; i < coefficients_.size(); ++i) out += w[i] * (coefficients_[i] * y);
  return out;
}

SpMat GenericProblem::assemble(Complex mu) const {
  const auto w = taylor_weights(mu, coefficients_.size());
  SpMat out(dim(), dim());
  for (std::size_t i = 0; i < coefficients_.size(); ++i) out += w[i] * coefficients_[i];
  out.makeCompressed();
  return out;
}

std::optional<int> GenericProblem::polynomial_degree() const {
  if (!polynomial_) return std::nullopt;
  return static_cast<int>(coefficients_.size()) - 1;
}

GenericLowRankProblem::GenericLowRankProblem(std::vector<SpMat> coefficients, Mat u, Mat v,
                                             std::vector<Mat> f_derivatives, Vec rhs, bool polynomial)
    : coefficients_(std::move(coefficients)),
      u_(std::move(u)),
      v_(std::move(v)),
      f_derivatives_(std::move(f_derivatives)),
      rhs_(std::move(rhs)),
      polynomial_(polynomial) {
  const Index n = rhs_.size();
  if (coefficients_.size() < 2) {
    throw ProblemDefinitionError("low-rank problem needs A_0..A_s with s >= 1");
  }
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    require_square(coefficients_[i], n, "coefficient A_" + std::to_string(i));
    coefficients_[i].makeCompressed();
  }
  if (u_.rows() != n || v_.rows() != n || u_.cols() != v_.cols() || u_.cols() < 1) {
    throw ProblemDefinitionError("U and V must both be n x p with p >= 1");
  }
  for (std::size_t i = 0; i < f_derivatives_.size(); ++i) {
    if (f_derivatives_[i].rows() != u_.cols() || f_derivatives_[i].cols() != u_.cols()) {
      throw ProblemDefinitionError("F derivative " + std::to_string(i) + " is not p x p");
    }
  }
  lu_ = A0Factorization(coefficients_[0]);
}

const Mat& GenericLowRankProblem::f_at(int order) const {
  const auto index = static_cast<std::size_t>(order - split_order() - 1);
  if (index >= f_derivatives_.size()) {
    throw ProblemDefinitionError("low-rank derivative of order " + std::to_string(order) +
                                 " requested but only orders up to " +
                                 std::to_string(split_order() + static_cast<int>(f_derivatives_.size())) +
                                 " are defined");
  }
  return f_derivatives_[index];
}

Vec GenericLowRankProblem::lowrank_apply(int order, const Vec& z) const {
  if (order <= split_order()) throw RangeError("lowrank_apply is defined for orders above s only");
  if (polynomial_ && static_cast<std::size_t>(order - split_order()) > f_derivatives_.size()) {
    return Vec::Zero(dim());
  }
  return u_ * (f_at(order) * z);
}

Vec GenericLowRankProblem::derivative_apply(int order, const Vec& y) const {
  if (order < 0) throw RangeError("negative derivative order");
  if (order <= split_order()) return coefficients_[static_cast<std::size_t>(order)] * y;
  return lowrank_apply(order, vt_apply(y));
}

Vec GenericLowRankProblem::evaluate_apply(Complex mu, const Vec& y) const {
  const std::size_t count = coefficients_.size() + f_derivatives_.size();
  const auto w = taylor_weights(mu, count);
  Vec out = Vec::Zero(dim());
  for (std::size_t i = 0; i < coefficients_.size(); ++i) out += w[i] * (coefficients_[i] * y);
  if (!f_derivatives_.empty()) {
    Mat f_sum = Mat::Zero(rank(), rank());
    for (std::size_t i = 0; i < f_derivatives_.size(); ++i) {
      f_sum += w[coefficients_.size() + i] * f_derivatives_[i];
    }
    out += u_ * (f_sum * vt_apply(y));
  }
  return out;
}

SpMat GenericLowRankProblem::assemble(Complex mu) const {
  const std::size_t count = coefficients_.size() + f_derivatives_.size();
  const auto w = taylor_weights(mu, count);
  SpMat out(dim(), dim());
  for (std::size_t i = 0; i < coefficients_.size(); ++i) out += w[i] * coefficients_[i];
  if (!f_derivatives_.empty()) {
    Mat f_sum = Mat::Zero(rank(), rank());
    for (std::size_t i = 0; i < f_derivatives_.size(); ++i) {
      f_sum += w[coefficients_.size() + i] * f_derivatives_[i];
    }
    const Mat dense = u_ * f_sum * v_.transpose();
    out += dense.sparseView();
  }
  out.makeCompressed();
  return out;
}

std::optional<int> GenericLowRankProblem::polynomial_degree() const {
  if (!polynomial_) return std::nullopt;
  return split_order() + static_cast<int>(f_derivatives_.size());
}

// ------------------------------------------------------------- manifest

std::shared_ptr<TaylorProblem> load_generic(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError(manifest_path.string() + ": cannot open manifest");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ProblemDefinitionError(manifest_path.string() + ": invalid JSON: " + e.what());
  }

  const auto base = manifest_path.parent_path();
  const auto context = [&](const std::string& what) { return manifest_path.string() + ": " + what; };
  const auto path_of = [&](const nlohmann::json& entry, const std::string& field) {
    if (!entry.is_string()) throw ProblemDefinitionError(context("'" + field + "' must be a path string"));
    return base / entry.get<std::string>();
  };

  try {
    if (!doc.contains("rhs") || !doc.contains("coefficients") || !doc["coefficients"].is_array()) {
      throw ProblemDefinitionError(context("manifest needs 'rhs' and a 'coefficients' array"));
    }
    Vec rhs = matrix_market::read_vector(path_of(doc["rhs"], "rhs"));
    const Index n = doc.value("n", rhs.size());
    if (rhs.size() != n) {
      throw ProblemDefinitionError(context("rhs has length " + std::to_string(rhs.size()) +
                                           " but n = " + std::to_string(n)));
    }

    std::vector<SpMat> coefficients;
    for (const auto& entry : doc["coefficients"]) {
      const auto path = path_of(entry, "coefficients");
      SpMat a = matrix_market::read_sparse(path);
      if (a.rows() != n || a.cols() != n) {
        throw ProblemDefinitionError(path.string() + ": expected " + std::to_string(n) + " x " +
                                     std::to_string(n) + ", found " + std::to_string(a.rows()) +
                                     " x " + std::to_string(a.cols()));
      }
      coefficients.push_back(std::move(a));
    }
    if (coefficients.empty()) throw ProblemDefinitionError(context("'coefficients' is empty"));
    const bool polynomial = doc.value("polynomial", false);

    if (!doc.contains("lowrank") || doc["lowrank"].is_null()) {
      return std::make_shared<GenericProblem>(std::move(coefficients), std::move(rhs), polynomial);
    }

    const auto& lr = doc["lowrank"];
    const int s = lr.value("s", static_cast<int>(coefficients.size()) - 1);
    if (s != static_cast<int>(coefficients.size()) - 1) {
      throw ProblemDefinitionError(context("lowrank.s = " + std::to_string(s) + " but " +
                                           std::to_string(coefficients.size()) +
                                           " coefficient matrices (A_0..A_s) were listed"));
    }
    if (!lr.contains("U") || !lr.contains("V")) throw ProblemDefinitionError(context("lowrank needs U and V"));
    Mat u = matrix_market::read_dense(path_of(lr["U"], "lowrank.U"));
    Mat v = matrix_market::read_dense(path_of(lr["V"], "lowrank.V"));
    std::vector<Mat> f_derivs;
    if (lr.contains("F_derivs")) {
      for (const auto& entry : lr["F_derivs"]) f_derivs.push_back(matrix_market::read_dense(path_of(entry, "F_derivs")));
    }
    return std::make_shared<GenericLowRankProblem>(std::move(coefficients), std::move(u), std::move(v),
                                                   std::move(f_derivs), std::move(rhs), polynomial);
  } catch (const nlohmann::json::exception& e) {
    throw ProblemDefinitionError(context(e.what()));
  } catch (const ProblemDefinitionError& e) {
    const std::string what = e.what();
    if (what.rfind(manifest_path.string(), 0) == 0 || what.find(".mtx") != std::string::npos) throw;
    throw ProblemDefinitionError(context(what));
  }
}

}  // namespace infgmres
