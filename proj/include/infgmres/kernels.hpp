#pragma once

#include <span>

#include "infgmres/types.hpp"

// Data-parallel inner loops of the Gram-Schmidt process. Basis columns are
// ragged: column i is stored up to its own length and is implicitly zero
// beyond it. The OpenMP versions are the production path; the serial
// namespace keeps a plain reference used by the tests and the benchmark.
namespace infgmres::kernels {

/// h_i = basis[i]^H y (conjugate-linear in the basis column).
void project(std::span<const Vec> basis, const Vec& y, Vec& h);

/// y -= sum_i h_i basis[i]
void subtract(std::span<const Vec> basis, const Vec& h, Vec& y);

/// Frobenius variants for coefficient matrices whose leading rows and
/// columns overlap the top-left corner of y.
void project(std::span<const Mat> basis, const Mat& y, Vec& h);
void subtract(std::span<const Mat> basis, const Vec& h, Mat& y);

namespace serial {
void project(std::span<const Vec> basis, const Vec& y, Vec& h);
void subtract(std::span<const Vec> basis, const Vec& h, Vec& y);
}  // namespace serial

/// Applies INFGMRES_THREADS (when set to a positive integer) as the OpenMP
/// thread cap. Returns the resulting maximum thread count.
int configure_threads_from_env();

}  // namespace infgmres::kernels
