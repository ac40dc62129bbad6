#include "infgmres/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace infgmres::matrix_market {

namespace {

enum class Format { coordinate, array };
enum class Field { real, complex, integer, pattern };
enum class Symmetry { general, symmetric, skew, hermitian };

struct Header {
  Format format = Format::coordinate;
  Field field = Field::real;
  Symmetry symmetry = Symmetry::general;
  Index rows = 0;
  Index cols = 0;
  Index entries = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

struct Reader {
  std::ifstream in;
  std::filesystem::path path;
  Header header;
  std::vector<Eigen::Triplet<Complex>> triplets;

  explicit Reader(const std::filesystem::path& p) : in(p), path(p) {
    if (!in) fail(path, "cannot open Matrix Market file");
    parse_banner();
    parse_size();
    parse_entries();
  }

  void parse_banner() {
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket") fail(path, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") fail(path, "unsupported object '" + object + "'");

    format = lower(format);
    if (format == "coordinate") header.format = Format::coordinate;
    else if (format == "array") header.format = Format::array;
    else fail(path, "unsupported format '" + format + "'");

    field = lower(field);
    if (field == "real" || field == "double") header.field = Field::real;
    else if (field == "complex") header.field = Field::complex;
    else if (field == "integer") header.field = Field::integer;
    else if (field == "pattern") header.field = Field::pattern;
    else fail(path, "unsupported field '" + field + "'");

    symmetry = lower(symmetry);
    if (symmetry == "general") header.symmetry = Symmetry::general;
    else if (symmetry == "symmetric") header.symmetry = Symmetry::symmetric;
    else if (symmetry == "skew-symmetric") header.symmetry = Symmetry::skew;
    else if (symmetry == "hermitian") header.symmetry = Symmetry::hermitian;
    else fail(path, "unsupported symmetry '" + symmetry + "'");

    if (header.format == Format::array && header.field == Field::pattern) {
      fail(path, "pattern field is not valid for array format");
    }
  }

  bool next_data_line(std::string& line) {
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      return true;
    }
    return false;
  }

  void parse_size() {
    std::string line;
    if (!next_data_line(line)) fail(path, "missing size line");
    std::istringstream size(line);
    if (header.format == Format::coordinate) {
      if (!(size >> header.rows >> header.cols >> header.entries)) fail(path, "malformed size line");
    } else {
      if (!(size >> header.rows >> header.cols)) fail(path, "malformed size line");
      header.entries = header.rows * header.cols;
      if (header.symmetry != Symmetry::general) {
        header.entries = header.symmetry == Symmetry::skew ? header.rows * (header.rows - 1) / 2
                                                           : header.rows * (header.rows + 1) / 2;
      }
    }
    if (header.rows < 0 || header.cols < 0 || header.entries < 0) fail(path, "negative size");
    if (header.symmetry != Symmetry::general && header.rows != header.cols) {
      fail(path, "symmetric storage requires a square matrix");
    }
  }

  Complex read_value(std::istringstream& line, Index number) {
    double re = 1.0, im = 0.0;
    switch (header.field) {
      case Field::pattern: break;
      case Field::real:
      case Field::integer:
        if (!(line >> re)) fail(path, "entry " + std::to_string(number) + ": missing value");
        break;
      case Field::complex:
        if (!(line >> re >> im)) fail(path, "entry " + std::to_string(number) + ": missing complex value");
        break;
    }
    return {re, im};
  }

  void add(Index i, Index j, Complex v) {
    triplets.emplace_back(i, j, v);
    if (i == j) return;
    switch (header.symmetry) {
      case Symmetry::general: break;
      case Symmetry::symmetric: triplets.emplace_back(j, i, v); break;
      case Symmetry::skew: triplets.emplace_back(j, i, -v); break;
      case Symmetry::hermitian: triplets.emplace_back(j, i, std::conj(v)); break;
    }
  }

  void parse_entries() {
    triplets.reserve(static_cast<std::size_t>(header.entries));
    std::string text;
    Index row = 0, col = 0;
    for (Index k = 0; k < header.entries; ++k) {
      if (!next_data_line(text)) {
        fail(path, "expected " + std::to_string(header.entries) + " entries, found " + std::to_string(k));
      }
      std::istringstream line(text);
      if (header.format == Format::coordinate) {
        Index i = 0, j = 0;
        if (!(line >> i >> j)) fail(path, "entry " + std::to_string(k + 1) + ": missing indices");
        if (i < 1 || i > header.rows || j < 1 || j > header.cols) {
          fail(path, "entry " + std::to_string(k + 1) + ": index out of range");
        }
        add(i - 1, j - 1, read_value(line, k + 1));
      } else {
        // Column-major; symmetric arrays list the lower triangle only.
        add(row, col, read_value(line, k + 1));
        ++row;
        if (row == header.rows) {
          ++col;
          row = header.symmetry == Symmetry::general ? 0
                : header.symmetry == Symmetry::skew  ? col + 1
                                                     : col;
        }
      }
    }
  }
};

void write_header(std::ofstream& out, const std::filesystem::path& path, const char* format) {
  if (!out) fail(path, "cannot open for writing");
  out << "%%MatrixMarket matrix " << format << " complex general\n";
}

void write_complex(std::ofstream& out, Complex v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
  out << buf;
}

}  // namespace

SpMat read_sparse(const std::filesystem::path& path) {
  Reader reader(path);
  SpMat out(reader.header.rows, reader.header.cols);
  out.setFromTriplets(reader.triplets.begin(), reader.triplets.end());
  out.makeCompressed();
  return out;
}

Mat read_dense(const std::filesystem::path& path) { return Mat(read_sparse(path)); }

Vec read_vector(const std::filesystem::path& path) {
  const Mat m = read_dense(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  fail(path, "expected a vector, found a " + std::to_string(m.rows()) + " x " +
                 std::to_string(m.cols()) + " matrix");
}

void write_sparse(const std::filesystem::path& path, const SpMat& matrix) {
  std::ofstream out(path);
  write_header(out, path, "coordinate");
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  for (Index k = 0; k < matrix.outerSize(); ++k) {
    for (SpMat::InnerIterator it(matrix, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ';
      write_complex(out, it.value());
      out << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

void write_dense(const std::filesystem::path& path, const Mat& matrix) {
  std::ofstream out(path);
  write_header(out, path, "array");
  out << matrix.rows() << ' ' << matrix.cols() << '\n';
  for (Index j = 0; j < matrix.cols(); ++j) {
    for (Index i = 0; i < matrix.rows(); ++i) {
      write_complex(out, matrix(i, j));
      out << '\n';
    }
  }
  if (!out) fail(path, "write failed");
}

void write_vector(const std::filesystem::path& path, const Vec& vector) { write_dense(path, vector); }

}  // namespace infgmres::matrix_market
