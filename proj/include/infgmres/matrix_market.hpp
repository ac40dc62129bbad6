#pragma once

#include <filesystem>

#include "infgmres/types.hpp"

// Matrix Market exchange format: coordinate and array storage; real,
// complex, integer and pattern fields; general, symmetric, skew-symmetric
// and hermitian symmetry. Writers always emit complex general with 17
// significant digits; a write/read cycle is exact.
namespace infgmres::matrix_market {

SpMat read_sparse(const std::filesystem::path& path);
Mat read_dense(const std::filesystem::path& path);
/// Reads an n x 1 (or 1 x n) matrix as a vector.
Vec read_vector(const std::filesystem::path& path);

void write_sparse(const std::filesystem::path& path, const SpMat& matrix);
void write_dense(const std::filesystem::path& path, const Mat& matrix);
void write_vector(const std::filesystem::path& path, const Vec& vector);

}  // namespace infgmres::matrix_market
