#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tidecoh {

using complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Process-wide numeric tolerances. Read through numerics(); tests and the CLI
// may swap the whole set with set_numerics() before starting work.
struct Numerics {
  double algebraic = 1e-12;       // normalization, Hermiticity, trace
  double eigen_floor = -1e-10;    // smallest admissible eigenvalue
  double weight_sum = 1e-9;       // Born-weight completeness
  double input_norm = 1e-9;       // user-supplied amplitude pairs (|d|^2+|e|^2 etc.)
  double degenerate_branch = 1e-12;  // relative-state magnitude treated as zero
  double image_residual = 1e-9;   // recoherence left-inverse residual
};

const Numerics& numerics();
void set_numerics(const Numerics& n);

// Error hierarchy. Everything the library throws derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace tidecoh
