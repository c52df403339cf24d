#pragma once

// Dense complex linear algebra helpers shared by all modules.
// Conventions: all matrices are column-major Eigen dynamic matrices over
// std::complex<double>; "herm"/"skew" split A = H + iK with H, K Hermitian.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vesselkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// errors

enum class ErrorCode {
  DimensionMismatch,
  NonCommuting,
  NonDissipative,
  SingularSigma,
  SingularTransform,
  SingularShift,
  NotInCone,
  InsufficientInitialData,
  OutsideDomain,
  PreconditionResidual,
  RetryExhausted,
  NotVR,
  ParseError,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

// ---------------------------------------------------------------------------
// norms and parts

inline double fro(const Matrix& a) { return a.norm(); }

// Largest singular value. Small dense matrices only.
double op_norm(const Matrix& a);

inline Matrix herm_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

// Imaginary part in the operator sense: (A - A*)/(2i), Hermitian.
inline Matrix imag_part(const Matrix& a) {
  return (a - a.adjoint()) / (2.0 * kI);
}

inline double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).norm();
}

// Relative residual: ||r|| / max(1, scale).
inline double rel(double residual_norm, double scale) {
  return residual_norm / std::max(1.0, scale);
}

// ---------------------------------------------------------------------------
// Hermitian eigen machinery

struct HermEig {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

HermEig herm_eig(const Matrix& a);

double lambda_min(const Matrix& hermitian);

// e^{i t H} for Hermitian H (unitary result).
Matrix herm_phase(const Matrix& hermitian, double t);

// Square root / inverse square root of a Hermitian PSD matrix, eigenvalues
// clamped below at `clamp` before the root is taken.
Matrix sqrt_psd(const Matrix& g, double clamp);
Matrix inv_sqrt_psd(const Matrix& g, double clamp);

// ---------------------------------------------------------------------------
// matrix exponential, scaling and squaring with Pade(13) kernel

Matrix expm(const Matrix& a);

// Top-right block of exp([[X, Q], [0, Y]]); equals
// \int_0^1 e^{(1-w)X} Q e^{wY} dw  for X n x n, Q n x m, Y m x m.
Matrix coupling_integral(const Matrix& x, const Matrix& q, const Matrix& y);

// ---------------------------------------------------------------------------
// subspace helpers

// Orthonormal basis of the numerical null space of `a` (right singular
// vectors with sigma <= tol * sigma_max). Returns m x k with k possibly 0.
Matrix null_space(const Matrix& a, double tol);

// Orthonormal basis for the column span of `a` (singular value cut at
// tol * sigma_max). Returns n x r.
Matrix column_space(const Matrix& a, double tol);

double smallest_singular_value(const Matrix& a);

// Minimum-norm least squares solution of a x = b and the attained residual.
struct LeastSquares {
  Vector solution;
  double residual;
};
LeastSquares solve_least_squares(const Matrix& a, const Vector& b);

// ---------------------------------------------------------------------------
// deterministic random source (splitmix64; identical streams on every
// platform, unlike <random> distributions)

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();         // [0, 1)
  double normal();          // standard normal, Box-Muller
  Complex complex_normal(); // (normal + i normal)/sqrt(2)

  Matrix complex_gaussian(int rows, int cols);
  Matrix hermitian_gaussian(int n);
  Matrix positive_definite(int n, double shift = 0.1);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vesselkit
