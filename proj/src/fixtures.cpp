#include "vesselkit/fixtures.hpp"

#include <cmath>

namespace vesselkit {
namespace fixtures {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix dissipative_matrix(Rng& rng, int k, double imag_floor) {
  Matrix h = 0.5 * rng.hermitian_gaussian(k);
  Matrix p = rng.positive_definite(k, imag_floor);
  return h + kI * p;
}

CommutingTuple tensor_tuple(std::uint64_t seed, int d, int factor_dim) {
  Rng rng(seed);
  std::vector<Matrix> factors(d);
  for (int j = 0; j < d; ++j) factors[j] = dissipative_matrix(rng, factor_dim);

  int n = 1;
  for (int j = 0; j < d; ++j) n *= factor_dim;
  CommutingTuple tuple;
  tuple.d = d;
  tuple.dim_h = n;
  tuple.A.resize(d);
  Matrix id = Matrix::Identity(factor_dim, factor_dim);
  for (int j = 0; j < d; ++j) {
    Matrix acc = (j == 0) ? factors[0] : id;
    for (int pos = 1; pos < d; ++pos)
      acc = kron(acc, pos == j ? factors[j] : id);
    tuple.A[j] = acc;
  }
  return tuple;
}

CommutingTuple jordan_tuple(std::uint64_t seed, int n) {
  Rng rng(seed);
  Matrix jordan = Matrix::Zero(n, n);
  double lambda = rng.normal();
  for (int i = 0; i < n; ++i) {
    jordan(i, i) = lambda;
    if (i + 1 < n) jordan(i, i + 1) = 1.0;
  }
  // i(J - J^T)/2 is indefinite with norm < 1; a unit-floor PSD part keeps the
  // sum dissipative
  Matrix p = rng.positive_definite(n, 1.0);
  CommutingTuple tuple;
  tuple.d = 1;
  tuple.dim_h = n;
  tuple.A = {0.5 * (jordan + kI * p)};
  tuple.require_valid();
  return tuple;
}

CommutingTuple polynomial_tuple(std::uint64_t seed, int d, int n,
                                int max_tries) {
  Rng rng(seed);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Matrix source = rng.complex_gaussian(n, n) / std::sqrt(double(n));
    std::vector<Matrix> ops(d);
    bool good = true;
    for (int j = 0; j < d; ++j) {
      // degree-2 polynomial in the shared source
      Complex c0 = rng.complex_normal(), c1 = rng.complex_normal(),
              c2 = rng.complex_normal();
      Matrix p = c0 * Matrix::Identity(n, n) + c1 * source +
                 c2 * (source * source);
      double lift = -lambda_min(imag_part(p));
      ops[j] = p + kI * (lift + 0.3) * Matrix::Identity(n, n);
      if (!(ops[j].norm() < 50.0)) good = false;
    }
    if (!good) continue;
    CommutingTuple tuple;
    tuple.d = d;
    tuple.dim_h = n;
    tuple.A = ops;
    try {
      tuple.require_valid();
      return tuple;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::RetryExhausted,
              "polynomial_tuple: no dissipative draw found");
}

Vessel decoupled_w_vessel(std::uint64_t seed, int d, int factor_dim) {
  CommutingTuple tuple = tensor_tuple(seed, d, factor_dim);
  Vessel base = make_strict_vessel(tuple);
  Rng rng(seed ^ 0x5EEDBEEFULL);

  Vessel out;
  out.d = base.d;
  out.dim_h = base.dim_h;
  out.dim_e = base.dim_e + 1;
  out.A = base.A;
  out.Phi = Matrix::Zero(out.dim_e, out.dim_h);
  out.Phi.topRows(base.dim_e) = base.Phi;

  // the last signal direction is invisible to Phi^* sigma_j but carries
  // nontrivial pencil action c_j, g_{jk}
  std::vector<double> c(d), g1(d, 0.0);
  for (int j = 0; j < d; ++j) c[j] = 0.5 + rng.uniform();
  for (int j = 1; j < d; ++j) g1[j] = rng.normal();

  out.sigma.resize(d);
  for (int j = 0; j < d; ++j) {
    out.sigma[j] = Matrix::Zero(out.dim_e, out.dim_e);
    out.sigma[j].topLeftCorner(base.dim_e, base.dim_e) = base.sigma[j];
    out.sigma[j](base.dim_e, base.dim_e) = c[j];
  }
  out.gamma = GammaTable(d, out.dim_e);
  out.gamma_star = GammaTable(d, out.dim_e);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix g = Matrix::Zero(out.dim_e, out.dim_e);
      g.topLeftCorner(base.dim_e, base.dim_e) = base.gamma.stored(j, k);
      // scalar block obeys the elimination identity so the pencil block
      // structure stays very reasonable
      double scalar = (j == 0) ? g1[k] : (c[j] * g1[k] - c[k] * g1[j]) / c[0];
      g(base.dim_e, base.dim_e) = scalar;
      out.gamma.set(j, k, g);

      Matrix gs = Matrix::Zero(out.dim_e, out.dim_e);
      gs.topLeftCorner(base.dim_e, base.dim_e) = base.gamma_star.stored(j, k);
      gs(base.dim_e, base.dim_e) = scalar;  // linkage: the W block of
                                            // sigma Phi Phi^* sigma vanishes
      out.gamma_star.set(j, k, gs);
    }
  return out;
}

}  // namespace fixtures
}  // namespace vesselkit
