#include "infgmres/kernels.hpp"

#include <algorithm>
#include <cstdlib>

#include <omp.h>

namespace infgmres::kernels {

namespace {

constexpr Index row_chunk = 2048;

constexpr Index parallel_threshold = 1 << 14;

Index total_work(std::span<const Vec> basis) {
  Index work = 0;
  for (const auto& q : basis) work += q.size();
  return work;
}

}  // namespace

void project(std::span<const Vec> basis, const Vec& y, Vec& h) {
  const auto m = static_cast<Index>(basis.size());
  h.resize(m);
  const bool parallel = total_work(basis) >= parallel_threshold;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (Index i = 0; i < m; ++i) {
    const Vec& q = basis[static_cast<std::size_t>(i)];
    h(i) = q.dot(y.head(q.size()));
  }
}

void subtract(std::span<const Vec> basis, const Vec& h, Vec& y) {
  const Index len = y.size();
  const Index chunks = (len + row_chunk - 1) / row_chunk;
  const bool parallel = total_work(basis) >= parallel_threshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (Index c = 0; c < chunks; ++c) {
    const Index r0 = c * row_chunk;
    const Index r1 = std::min(len, r0 + row_chunk);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Vec& q = basis[i];
      const Index stop = std::min(r1, q.size());
      if (stop <= r0) continue;
      y.segment(r0, stop - r0).noalias() -= h(static_cast<Index>(i)) * q.segment(r0, stop - r0);
    }
  }
}

void project(std::span<const Mat> basis, const Mat& y, Vec& h) {
  const auto m = static_cast<Index>(basis.size());
  h.resize(m);
  for (Index i = 0; i < m; ++i) {
    const Mat& a = basis[static_cast<std::size_t>(i)];
    h(i) = (a.conjugate().cwiseProduct(y.topLeftCorner(a.rows(), a.cols()))).sum();
  }
}

void subtract(std::span<const Mat> basis, const Vec& h, Mat& y) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mat& a = basis[i];
    y.topLeftCorner(a.rows(), a.cols()).noalias() -= h(static_cast<Index>(i)) * a;
  }
}

namespace serial {

void project(std::span<const Vec> basis, const Vec& y, Vec& h) {
  h.resize(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vec& q = basis[i];
    Complex acc = 0.0;
    for (Index r = 0; r < q.size(); ++r) acc += std::conj(q(r)) * y(r);
    h(static_cast<Index>(i)) = acc;
  }
}

void subtract(std::span<const Vec> basis, const Vec& h, Vec& y) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vec& q = basis[i];
    const Complex hi = h(static_cast<Index>(i));
    for (Index r = 0; r < q.size(); ++r) y(r) -= hi * q(r);
  }
}

}  // namespace serial

int configure_threads_from_env() {
  if (const char* env = std::getenv("INFGMRES_THREADS")) {
    char* end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && requested > 0) {
      omp_set_num_threads(static_cast<int>(requested));
    }
  }
  return omp_get_max_threads();
}

}  // namespace infgmres::kernels
