#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace infgmres {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<Complex>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Block sizes or vector lengths do not fit the operator they are fed to.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The problem cannot supply what was asked of it: singular A(0), a
/// derivative order past a finite coefficient list, inconsistent files.
class ProblemDefinitionError : public Error {
 public:
  using Error::Error;
};

/// The starting vector A(0)^{-1} b vanished, so there is no Krylov space.
class EmptyKrylovError : public Error {
 public:
  using Error::Error;
};

/// A dense reference computation was requested above its hard size limit.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace infgmres
