#include "vesselkit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace vesselkit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonCommuting: return "NonCommuting";
    case ErrorCode::NonDissipative: return "NonDissipative";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::InsufficientInitialData: return "InsufficientInitialData";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::PreconditionResidual: return "PreconditionResidual";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
    case ErrorCode::NotVR: return "NotVR";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

double op_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

HermEig herm_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::Internal, "Hermitian eigendecomposition failed");
  return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

double lambda_min(const Matrix& hermitian) {
  if (hermitian.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Matrix herm_phase(const Matrix& hermitian, double t) {
  HermEig eig = herm_eig(hermitian);
  Vector phases(eig.values.size());
  for (int i = 0; i < eig.values.size(); ++i)
    phases(i) = std::polar(1.0, t * eig.values(i));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix sqrt_psd(const Matrix& g, double clamp) {
  if (g.rows() == 0) return g;
  HermEig eig = herm_eig(g);
  RealVector roots(eig.values.size());
  for (int i = 0; i < eig.values.size(); ++i)
    roots(i) = std::sqrt(std::max(eig.values(i), clamp));
  return eig.vectors * roots.asDiagonal().toDenseMatrix().cast<Complex>() *
         eig.vectors.adjoint();
}

Matrix inv_sqrt_psd(const Matrix& g, double clamp) {
  if (g.rows() == 0) return g;
  HermEig eig = herm_eig(g);
  RealVector roots(eig.values.size());
  for (int i = 0; i < eig.values.size(); ++i)
    roots(i) = 1.0 / std::sqrt(std::max(eig.values(i), clamp));
  return eig.vectors * roots.asDiagonal().toDenseMatrix().cast<Complex>() *
         eig.vectors.adjoint();
}

// Pade(13) scaling and squaring, Higham 2005. Degree 13 throughout: every
// matrix in this codebase is small, so the lower-degree ladder buys nothing.
Matrix expm(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, "expm: square matrix required");

  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const double theta13 = 5.371920351148152;

  double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13)
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  Matrix as = a / std::pow(2.0, squarings);

  Matrix id = Matrix::Identity(n, n);
  Matrix a2 = as * as;
  Matrix a4 = a2 * a2;
  Matrix a6 = a2 * a4;

  Matrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                   b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
             b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

Matrix coupling_integral(const Matrix& x, const Matrix& q, const Matrix& y) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = y.rows();
  if (q.rows() != n || q.cols() != m)
    throw Error(ErrorCode::DimensionMismatch, "coupling_integral: block shapes");
  Matrix block = Matrix::Zero(n + m, n + m);
  block.topLeftCorner(n, n) = x;
  block.topRightCorner(n, m) = q;
  block.bottomRightCorner(m, m) = y;
  Matrix e = expm(block);
  return e.topRightCorner(n, m);
}

Matrix null_space(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0)
    return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = tol * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix column_space(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return Matrix(a.rows(), 0);
  double cut = tol * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

double smallest_singular_value(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

LeastSquares solve_least_squares(const Matrix& a, const Vector& b) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector x = svd.solve(b);
  return LeastSquares{x, (a * x - b).norm()};
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  state_ += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

Matrix Rng::complex_gaussian(int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

Matrix Rng::hermitian_gaussian(int n) {
  Matrix g = complex_gaussian(n, n);
  return herm_part(g);
}

Matrix Rng::positive_definite(int n, double shift) {
  Matrix g = complex_gaussian(n, n) / std::sqrt(static_cast<double>(n));
  return g * g.adjoint() + shift * Matrix::Identity(n, n);
}

}  // namespace vesselkit
