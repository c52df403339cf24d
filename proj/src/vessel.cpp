#include "vesselkit/vessel.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace vesselkit {

namespace {

std::string pair_label(const char* base, int j, int k) {
  std::ostringstream os;
  os << base << "[" << (j + 1) << "," << (k + 1) << "]";
  return os.str();
}

std::string index_label(const char* base, int j) {
  std::ostringstream os;
  os << base << "[" << (j + 1) << "]";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// CommutingTuple

ConditionReport CommutingTuple::check(const Tolerances& tol) const {
  ConditionReport report;
  if (static_cast<int>(A.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "tuple: A.size() != d");
  for (const auto& a : A)
    if (a.rows() != dim_h || a.cols() != dim_h)
      throw Error(ErrorCode::DimensionMismatch, "tuple: operator shape");

  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      double res = (A[j] * A[k] - A[k] * A[j]).norm();
      double scale = std::max(1.0, A[j].norm() * A[k].norm());
      report.add(pair_label("commute", j, k), res / scale, tol.commute);
    }
  for (int j = 0; j < d; ++j) {
    Matrix im = 2.0 * imag_part(A[j]);  // (A - A*)/i
    double lmin = dim_h > 0 ? lambda_min(im) : 0.0;
    report.add(index_label("dissipative", j), std::max(0.0, -lmin), tol.psd);
  }
  return report;
}

void CommutingTuple::require_valid(const Tolerances& tol) const {
  ConditionReport report = check(tol);
  for (const auto& e : report.entries()) {
    if (e.pass) continue;
    bool commutator = e.name.rfind("commute", 0) == 0;
    throw Error(commutator ? ErrorCode::NonCommuting : ErrorCode::NonDissipative,
                e.name + " residual " + std::to_string(e.residual));
  }
}

// ---------------------------------------------------------------------------
// GammaTable

GammaTable::GammaTable(int d, int dim_e) : d_(d), dim_e_(dim_e) {
  entries_.assign(d * (d - 1) / 2, Matrix::Zero(dim_e, dim_e));
}

int GammaTable::index(int j, int k) const {
  // lexicographic over pairs j < k
  return j * d_ - j * (j + 1) / 2 + (k - j - 1);
}

void GammaTable::set(int j, int k, const Matrix& value) {
  if (j == k) throw Error(ErrorCode::DimensionMismatch, "gamma: j == k");
  if (j < k)
    entries_[index(j, k)] = value;
  else
    entries_[index(k, j)] = -value;
}

Matrix GammaTable::get(int j, int k) const {
  if (j == k) return Matrix::Zero(dim_e_, dim_e_);
  if (j < k) return entries_[index(j, k)];
  return -entries_[index(k, j)];
}

const Matrix& GammaTable::stored(int j, int k) const {
  return entries_[index(j, k)];
}

double GammaTable::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& e : entries_)
    worst = std::max(worst, vesselkit::hermiticity_defect(e));
  return worst;
}

double GammaTable::max_norm() const {
  double worst = 0.0;
  for (const auto& e : entries_) worst = std::max(worst, e.norm());
  return worst;
}

// ---------------------------------------------------------------------------
// Vessel

Matrix Vessel::sigma_of(const RealVector& xi) const {
  Matrix s = Matrix::Zero(dim_e, dim_e);
  for (int j = 0; j < d; ++j) s += xi(j) * sigma[j];
  return s;
}

Matrix Vessel::a_of(const RealVector& xi) const {
  Matrix s = Matrix::Zero(dim_h, dim_h);
  for (int j = 0; j < d; ++j) s += xi(j) * A[j];
  return s;
}

void Vessel::require_shapes() const {
  if (static_cast<int>(A.size()) != d ||
      static_cast<int>(sigma.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "vessel: family sizes");
  for (const auto& a : A)
    if (a.rows() != dim_h || a.cols() != dim_h)
      throw Error(ErrorCode::DimensionMismatch, "vessel: A shape");
  if (Phi.rows() != dim_e || Phi.cols() != dim_h)
    throw Error(ErrorCode::DimensionMismatch, "vessel: Phi shape");
  for (const auto& s : sigma)
    if (s.rows() != dim_e || s.cols() != dim_e)
      throw Error(ErrorCode::DimensionMismatch, "vessel: sigma shape");
  if (gamma.d() != d || gamma_star.d() != d ||
      gamma.dim_e() != dim_e || gamma_star.dim_e() != dim_e)
    throw Error(ErrorCode::DimensionMismatch, "vessel: gamma tables");
}

// ---------------------------------------------------------------------------
// NormalizedPencil

Matrix NormalizedPencil::alpha_of(const RealVector& x) const {
  Matrix s = Matrix::Zero(dim_e, dim_e);
  for (int j = 0; j < d; ++j) s += x(j) * alpha[j];
  return s;
}

Matrix NormalizedPencil::beta_of(const RealVector& x) const {
  Matrix s = Matrix::Zero(dim_e, dim_e);
  for (int j = 0; j < d; ++j) s += x(j) * beta[j];
  return s;
}

Matrix NormalizedPencil::pencil_at(const RealVector& x, double s) const {
  return s * alpha_of(x) + beta_of(x);
}

ConditionReport NormalizedPencil::check(const Tolerances& tol) const {
  ConditionReport report;
  Matrix id = Matrix::Identity(dim_e, dim_e);
  report.add("alpha1_identity", (alpha[0] - id).norm(), 0.0);
  report.add("beta1_zero", beta[0].norm(), 0.0);
  double herm = 0.0;
  for (int j = 0; j < d; ++j) {
    herm = std::max(herm, hermiticity_defect(alpha[j]));
    herm = std::max(herm, hermiticity_defect(beta[j]));
  }
  report.add("hermitian", herm, tol.identity);

  const double probes[4] = {0.0, 1.0, -1.0, 0.6180339887498949};
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      double worst = 0.0;
      for (double s : probes) {
        Matrix pj = s * alpha[j] + beta[j];
        Matrix pk = s * alpha[k] + beta[k];
        double scale = std::max(1.0, pj.norm() * pk.norm());
        worst = std::max(worst, (pj * pk - pk * pj).norm() / scale);
      }
      report.add(pair_label("pencil_commute", j, k), worst, tol.commute);
    }
  return report;
}

// ---------------------------------------------------------------------------
// strict embedding

Vessel make_strict_vessel(const CommutingTuple& tuple, double rank_tol,
                          const Tolerances& tol) {
  tuple.require_valid(tol);
  const int n = tuple.dim_h;
  const int d = tuple.d;

  std::vector<Matrix> imag_twice(d);  // (A_j - A_j^*)/i
  Matrix stacked(n, static_cast<Eigen::Index>(d) * n);
  for (int j = 0; j < d; ++j) {
    imag_twice[j] = (tuple.A[j] - tuple.A[j].adjoint()) / kI;
    stacked.middleCols(static_cast<Eigen::Index>(j) * n, n) = imag_twice[j];
  }

  Matrix basis = column_space(stacked, rank_tol);
  const int m = static_cast<int>(basis.cols());
  // Full non-Hermitian subspace: keep the standard basis so Phi is exactly
  // the identity.
  if (m == n) basis = Matrix::Identity(n, n);

  Vessel v;
  v.d = d;
  v.dim_h = n;
  v.dim_e = m;
  v.A = tuple.A;
  v.Phi = basis.adjoint();
  v.sigma.resize(d);
  for (int j = 0; j < d; ++j)
    v.sigma[j] = basis.adjoint() * imag_twice[j] * basis;
  v.gamma = GammaTable(d, m);
  v.gamma_star = GammaTable(d, m);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      const Matrix& aj = tuple.A[j];
      const Matrix& ak = tuple.A[k];
      Matrix g = (aj * ak.adjoint() - ak * aj.adjoint()) / kI;
      Matrix gs = (ak.adjoint() * aj - aj.adjoint() * ak) / kI;
      v.gamma.set(j, k, basis.adjoint() * g * basis);
      v.gamma_star.set(j, k, basis.adjoint() * gs * basis);
    }
  v.degenerate_signal_space = (m == 0);
  return v;
}

// ---------------------------------------------------------------------------
// vessel conditions

ConditionReport check_vessel(const Vessel& v, double tol) {
  v.require_shapes();
  ConditionReport report;

  for (int j = 0; j < v.d; ++j)
    report.add(index_label("sigma_hermitian", j),
               rel(hermiticity_defect(v.sigma[j]), v.sigma[j].norm()), tol);
  report.add("gamma_hermitian",
             rel(v.gamma.hermiticity_defect(), v.gamma.max_norm()), tol);
  report.add("gamma_star_hermitian",
             rel(v.gamma_star.hermiticity_defect(), v.gamma_star.max_norm()),
             tol);
  // gamma_kj = -gamma_jk holds exactly by storage.
  report.add("antisymmetry", 0.0, tol);

  for (int j = 0; j < v.d; ++j)
    for (int k = j + 1; k < v.d; ++k) {
      double res = (v.A[j] * v.A[k] - v.A[k] * v.A[j]).norm();
      report.add(pair_label("commute", j, k),
                 rel(res, v.A[j].norm() * v.A[k].norm()), tol);
    }

  double phi2 = v.Phi.norm() * v.Phi.norm();
  for (int k = 0; k < v.d; ++k) {
    Matrix res = v.A[k] - v.A[k].adjoint() -
                 kI * (v.Phi.adjoint() * v.sigma[k] * v.Phi);
    report.add(index_label("colligation", k),
               rel(res.norm(), v.A[k].norm() + phi2 * v.sigma[k].norm()), tol);
  }

  for (int j = 0; j < v.d; ++j)
    for (int k = j + 1; k < v.d; ++k) {
      double scale = v.Phi.norm() *
                     (v.sigma[j].norm() * v.A[k].norm() +
                      v.sigma[k].norm() * v.A[j].norm());
      Matrix in_res = v.sigma[j] * v.Phi * v.A[k].adjoint() -
                      v.sigma[k] * v.Phi * v.A[j].adjoint() -
                      v.gamma.get(j, k) * v.Phi;
      report.add(pair_label("input_vessel", j, k), rel(in_res.norm(), scale),
                 tol);
      Matrix out_res = v.sigma[j] * v.Phi * v.A[k] -
                       v.sigma[k] * v.Phi * v.A[j] -
                       v.gamma_star.get(j, k) * v.Phi;
      report.add(pair_label("output_vessel", j, k), rel(out_res.norm(), scale),
                 tol);
      Matrix link = v.gamma_star.get(j, k) - v.gamma.get(j, k) -
                    kI * (v.sigma[j] * v.Phi * v.Phi.adjoint() * v.sigma[k] -
                          v.sigma[k] * v.Phi * v.Phi.adjoint() * v.sigma[j]);
      report.add(pair_label("linkage", j, k),
                 rel(link.norm(),
                     phi2 * v.sigma[j].norm() * v.sigma[k].norm() +
                         v.gamma.get(j, k).norm() +
                         v.gamma_star.get(j, k).norm()),
                 tol);
    }
  return report;
}

// ---------------------------------------------------------------------------
// very reasonable conditions

namespace {

RealMatrix completion_to_basis(const RealVector& xi) {
  const int d = static_cast<int>(xi.size());
  int pivot = 0;
  xi.cwiseAbs().maxCoeff(&pivot);
  if (xi.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorCode::SingularTransform, "direction vector is zero");
  RealMatrix t = RealMatrix::Zero(d, d);
  t.col(0) = xi;
  int col = 1;
  for (int i = 0; i < d; ++i) {
    if (i == pivot) continue;
    t(i, col++) = 1.0;
  }
  return t;
}

// VR residuals for the first-axis direction on an already-oriented vessel.
ConditionReport check_vr_family(const Vessel& v, const GammaTable& gammas,
                                double tol) {
  ConditionReport report;
  if (v.dim_e == 0) {
    report.add_flag("vacuous", true, "empty signal space");
    return report;
  }
  const Matrix& s1 = v.sigma[0];
  double s1_norm = op_norm(s1);
  double s1_gap = smallest_singular_value(s1);
  if (s1_gap <= tol * std::max(1.0, s1_norm))
    throw Error(ErrorCode::SingularSigma,
                "sigma in the requested direction is numerically singular");
  if (v.d < 3) {
    report.add_flag("vacuous", true, "fewer than two off-axis directions");
    return report;
  }
  Eigen::PartialPivLU<Matrix> lu(s1);

  std::vector<Matrix> x(v.d), y(v.d);  // sigma1^{-1} sigma_j, sigma1^{-1} gamma_1j
  for (int j = 1; j < v.d; ++j) {
    x[j] = lu.solve(v.sigma[j]);
    y[j] = lu.solve(gammas.get(0, j));
  }

  for (int j = 1; j < v.d; ++j)
    for (int k = j + 1; k < v.d; ++k) {
      {
        Matrix res = x[j] * x[k] - x[k] * x[j];
        report.add(pair_label("vr1_sigma_commute", j, k),
                   rel(res.norm(), x[j].norm() * x[k].norm()), tol);
      }
      {
        Matrix res = y[j] * y[k] - y[k] * y[j];
        report.add(pair_label("vr2_gamma_commute", j, k),
                   rel(res.norm(), y[j].norm() * y[k].norm()), tol);
      }
      int third_at = static_cast<int>(report.entries().size());
      {
        Matrix lhs = x[k] * y[j] - y[j] * x[k];
        Matrix rhs = x[j] * y[k] - y[k] * x[j];
        report.add(pair_label("vr3_mixed_commute", j, k),
                   rel((lhs - rhs).norm(),
                       x[k].norm() * y[j].norm() + x[j].norm() * y[k].norm()),
                   tol);
      }
      {
        Matrix forced = v.sigma[j] * y[k] - v.sigma[k] * y[j];
        Matrix res = gammas.get(j, k) - forced;
        report.add(pair_label("vr4_elimination", j, k),
                   rel(res.norm(), gammas.get(j, k).norm() + forced.norm()),
                   tol);
        // implied by the elimination identity via the adjoint subtraction
        if (report.entries().back().pass) report.mark_redundant(third_at);
      }
    }
  return report;
}

}  // namespace

ConditionReport check_vr(const Vessel& v, const Direction& direction,
                         double tol) {
  v.require_shapes();
  if (direction.index == 0 && direction.xi.size() == 0)
    return check_vr_family(v, v.gamma, tol);
  RealMatrix t;
  if (direction.xi.size() > 0) {
    t = completion_to_basis(direction.xi);
  } else {
    t = RealMatrix::Identity(v.d, v.d);
    t.col(0).swap(t.col(direction.index));
  }
  Vessel oriented = coordinate_change(v, t);
  return check_vr_family(oriented, oriented.gamma, tol);
}

ConditionReport check_vr_star(const Vessel& v, double tol) {
  v.require_shapes();
  return check_vr_family(v, v.gamma_star, tol);
}

// ---------------------------------------------------------------------------
// adjoint and coordinate change

Vessel adjoint_vessel(const Vessel& v) {
  Vessel adj = v;
  for (int j = 0; j < v.d; ++j) {
    adj.A[j] = v.A[j].adjoint();
    adj.sigma[j] = -v.sigma[j];
  }
  adj.Phi = -v.Phi;
  // gamma and gamma* swap roles with a sign, so the adjoint tuple satisfies
  // the vessel conditions and the involution is exact.
  for (int j = 0; j < v.d; ++j)
    for (int k = j + 1; k < v.d; ++k) {
      adj.gamma.set(j, k, -v.gamma_star.stored(j, k));
      adj.gamma_star.set(j, k, -v.gamma.stored(j, k));
    }
  return adj;
}

Vessel coordinate_change(const Vessel& v, const RealMatrix& t) {
  if (t.rows() != v.d || t.cols() != v.d)
    throw Error(ErrorCode::DimensionMismatch, "coordinate_change: T shape");
  if (std::abs(t.determinant()) < 1e-12)
    throw Error(ErrorCode::SingularTransform, "coordinate_change: |det T| ~ 0");

  Vessel out = v;
  for (int j = 0; j < v.d; ++j) {
    Matrix a = Matrix::Zero(v.dim_h, v.dim_h);
    Matrix s = Matrix::Zero(v.dim_e, v.dim_e);
    for (int p = 0; p < v.d; ++p) {
      a += t(p, j) * v.A[p];
      s += t(p, j) * v.sigma[p];
    }
    out.A[j] = a;
    out.sigma[j] = s;
  }
  for (int j = 0; j < v.d; ++j)
    for (int k = j + 1; k < v.d; ++k) {
      Matrix g = Matrix::Zero(v.dim_e, v.dim_e);
      Matrix gs = Matrix::Zero(v.dim_e, v.dim_e);
      for (int p = 0; p < v.d; ++p)
        for (int q = p + 1; q < v.d; ++q) {
          double minor = t(p, j) * t(q, k) - t(p, k) * t(q, j);
          if (minor == 0.0) continue;
          g += minor * v.gamma.stored(p, q);
          gs += minor * v.gamma_star.stored(p, q);
        }
      out.gamma.set(j, k, g);
      out.gamma_star.set(j, k, gs);
    }
  return out;
}

// ---------------------------------------------------------------------------
// cone

double pos_cone_margin(const Vessel& v, const RealVector& xi) {
  if (v.dim_e == 0) return std::numeric_limits<double>::infinity();
  return lambda_min(herm_part(v.sigma_of(xi)));
}

ConditionReport dissipative_embedding_report(const Vessel& v, double tol) {
  ConditionReport report;
  const int d = v.d;
  RealVector ones = RealVector::Ones(d);

  bool vr_done = false;
  std::vector<Direction> candidates;
  candidates.push_back(Direction::vector(ones));
  for (int j = 0; j < d; ++j) candidates.push_back(Direction::axis(j));
  for (const auto& dir : candidates) {
    try {
      ConditionReport vr = check_vr(v, dir, tol);
      report.add_flag("vr", vr.pass(),
                      dir.xi.size() ? "direction=ones" : "axis direction");
      vr_done = true;
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSigma) throw;
    }
  }
  if (!vr_done)
    report.add_flag("vr", false, "no direction with invertible sigma");

  double margin_ones = pos_cone_margin(v, ones);
  {
    std::ostringstream os;
    os << "margin=" << margin_ones;
    report.add_flag("cone_nonempty_at_ones", margin_ones > 0.0, os.str());
  }

  const double eps[3] = {1e-2, 1e-4, 1e-6};
  for (int j = 0; j < d; ++j) {
    double margins[3];
    bool all_positive = true;
    for (int i = 0; i < 3; ++i) {
      RealVector xi = eps[i] * ones;
      xi(j) += 1.0;
      margins[i] = pos_cone_margin(v, xi);
      all_positive = all_positive && margins[i] > 0.0;
    }
    // linear-in-eps extrapolation of the margin to eps = 0
    double extrapolated =
        margins[2] + (margins[2] - margins[1]) * eps[2] / (eps[1] - eps[2]);
    std::ostringstream os;
    os << "margins=" << margins[0] << "," << margins[1] << "," << margins[2]
       << " extrapolated=" << extrapolated;
    report.add_flag(index_label("axis_in_cone_closure", j),
                    all_positive && extrapolated >= -tol, os.str());
  }
  return report;
}

// ---------------------------------------------------------------------------
// normalization

Normalized normalize(const Vessel& v, const RealVector& xi0,
                     const Tolerances& tol) {
  v.require_shapes();
  Matrix g0 = v.sigma_of(xi0);
  double margin = v.dim_e == 0 ? 1.0 : lambda_min(herm_part(g0));
  if (margin <= tol.identity)
    throw Error(ErrorCode::NotInCone,
                "normalize: sigma(xi0) is not positive definite");

  RealMatrix t = completion_to_basis(xi0);
  Vessel oriented = coordinate_change(v, t);
  Matrix g = oriented.sigma[0];
  Matrix g_half = sqrt_psd(g, tol.identity);
  Matrix g_inv_half = inv_sqrt_psd(g, tol.identity);

  Vessel out = oriented;
  out.Phi = g_half * oriented.Phi;
  for (int j = 0; j < v.d; ++j)
    out.sigma[j] = g_inv_half * oriented.sigma[j] * g_inv_half;
  for (int j = 0; j < v.d; ++j)
    for (int k = j + 1; k < v.d; ++k) {
      out.gamma.set(j, k, g_inv_half * oriented.gamma.stored(j, k) * g_inv_half);
      out.gamma_star.set(j, k,
                         g_inv_half * oriented.gamma_star.stored(j, k) * g_inv_half);
    }

  NormalizedPencil pencil;
  pencil.d = v.d;
  pencil.dim_e = v.dim_e;
  pencil.origin_direction = xi0;
  pencil.alpha.resize(v.d);
  pencil.beta.resize(v.d);
  pencil.alpha[0] = Matrix::Identity(v.dim_e, v.dim_e);
  pencil.beta[0] = Matrix::Zero(v.dim_e, v.dim_e);
  for (int j = 1; j < v.d; ++j) {
    pencil.alpha[j] = herm_part(out.sigma[j]);
    pencil.beta[j] = herm_part(out.gamma.get(0, j));
  }
  return Normalized{out, pencil};
}

NormalizedPencil output_pencil(const Normalized& nv) {
  NormalizedPencil pencil = nv.pencil;
  for (int j = 1; j < pencil.d; ++j)
    pencil.beta[j] = herm_part(nv.vessel.gamma_star.get(0, j));
  return pencil;
}

// ---------------------------------------------------------------------------
// completion from partial data

Vessel complete_partial_vessel(const CommutingTuple& tuple, const Matrix& phi,
                               const std::vector<Matrix>& sigma,
                               const std::vector<Matrix>& gamma_first_row,
                               double tol) {
  tuple.require_valid();
  const int d = tuple.d;
  const int m = static_cast<int>(phi.rows());
  if (static_cast<int>(sigma.size()) != d ||
      static_cast<int>(gamma_first_row.size()) != d - 1)
    throw Error(ErrorCode::DimensionMismatch,
                "complete_partial_vessel: family sizes");

  const Matrix& s1 = sigma[0];
  if (smallest_singular_value(s1) <= tol * std::max(1.0, op_norm(s1)))
    throw Error(ErrorCode::SingularSigma, "complete_partial_vessel: sigma_1");
  Eigen::PartialPivLU<Matrix> lu(s1);

  auto fail = [](const std::string& name, double res) {
    throw Error(ErrorCode::PreconditionResidual,
                name + " residual " + std::to_string(res));
  };

  for (int j = 0; j < d; ++j) {
    Matrix res = tuple.A[j] - tuple.A[j].adjoint() -
                 kI * (phi.adjoint() * sigma[j] * phi);
    double r = rel(res.norm(), tuple.A[j].norm() +
                                   phi.norm() * phi.norm() * sigma[j].norm());
    if (r > tol) fail(index_label("colligation", j), r);
  }
  for (int j = 1; j < d; ++j) {
    Matrix res = sigma[0] * phi * tuple.A[j].adjoint() -
                 sigma[j] * phi * tuple.A[0].adjoint() -
                 gamma_first_row[j - 1] * phi;
    double r = rel(res.norm(), phi.norm() * (sigma[0].norm() * tuple.A[j].norm() +
                                             sigma[j].norm() * tuple.A[0].norm()));
    if (r > tol) fail(pair_label("input_vessel", 0, j), r);
  }

  std::vector<Matrix> y(d);  // sigma1^{-1} gamma_1j
  std::vector<Matrix> x(d);  // sigma1^{-1} sigma_j
  for (int j = 1; j < d; ++j) {
    y[j] = lu.solve(gamma_first_row[j - 1]);
    x[j] = lu.solve(sigma[j]);
  }
  for (int j = 1; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      double r1 = rel((x[j] * x[k] - x[k] * x[j]).norm(),
                      x[j].norm() * x[k].norm());
      if (r1 > tol) fail(pair_label("vr1_sigma_commute", j, k), r1);
      double r2 = rel((y[j] * y[k] - y[k] * y[j]).norm(),
                      y[j].norm() * y[k].norm());
      if (r2 > tol) fail(pair_label("vr2_gamma_commute", j, k), r2);
      Matrix lhs = x[k] * y[j] - y[j] * x[k];
      Matrix rhs = x[j] * y[k] - y[k] * x[j];
      double r3 = rel((lhs - rhs).norm(),
                      x[k].norm() * y[j].norm() + x[j].norm() * y[k].norm());
      if (r3 > tol) fail(pair_label("vr3_mixed_commute", j, k), r3);
    }

  Vessel v;
  v.d = d;
  v.dim_h = tuple.dim_h;
  v.dim_e = m;
  v.A = tuple.A;
  v.Phi = phi;
  v.sigma = sigma;
  v.gamma = GammaTable(d, m);
  v.gamma_star = GammaTable(d, m);
  for (int j = 1; j < d; ++j) v.gamma.set(0, j, gamma_first_row[j - 1]);
  for (int j = 1; j < d; ++j)
    for (int k = j + 1; k < d; ++k)
      v.gamma.set(j, k, sigma[j] * y[k] - sigma[k] * y[j]);
  Matrix pp = phi * phi.adjoint();
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k)
      v.gamma_star.set(j, k,
                       v.gamma.get(j, k) +
                           kI * (sigma[j] * pp * sigma[k] -
                                 sigma[k] * pp * sigma[j]));
  return v;
}

// ---------------------------------------------------------------------------
// weak strictness

WeaklyStrictReport weakly_strict_report(const Vessel& v, double tol) {
  v.require_shapes();
  WeaklyStrictReport out;
  if (v.dim_e == 0) {
    out.weakly_strict = true;
    out.kernel_basis = Matrix(0, 0);
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }
  Matrix stacked(static_cast<Eigen::Index>(v.d) * v.dim_h, v.dim_e);
  for (int j = 0; j < v.d; ++j)
    stacked.middleRows(static_cast<Eigen::Index>(j) * v.dim_h, v.dim_h) =
        v.Phi.adjoint() * v.sigma[j];
  out.kernel_basis = null_space(stacked, tol);
  out.gap = smallest_singular_value(stacked);
  out.weakly_strict = out.kernel_basis.cols() == 0;
  return out;
}

// ---------------------------------------------------------------------------
// Cayley cogenerator

CayleyResult cayley_cogenerator(const Matrix& a, double tol) {
  const Eigen::Index n = a.rows();
  Matrix shift_plus = a + kI * Matrix::Identity(n, n);
  if (smallest_singular_value(shift_plus) <=
      tol * std::max(1.0, op_norm(a) + 1.0))
    throw Error(ErrorCode::SingularShift, "cayley: -i is an eigenvalue of A");
  CayleyResult result;
  Matrix shift_minus = a - kI * Matrix::Identity(n, n);
  // (A - iI)(A + iI)^{-1} computed through the transposed solve
  result.cogenerator = shift_plus.transpose()
                           .partialPivLu()
                           .solve(shift_minus.transpose())
                           .transpose();
  result.norm = op_norm(result.cogenerator);
  result.unitary_defect =
      (result.cogenerator.adjoint() * result.cogenerator -
       Matrix::Identity(n, n))
          .norm();
  return result;
}

double cayley_recovery_gap(const Matrix& a, double s) {
  const Eigen::Index n = a.rows();
  Matrix semigroup = expm(kI * s * a);
  Matrix numerator = semigroup - (1.0 - s) * Matrix::Identity(n, n);
  Matrix denominator = semigroup - (1.0 + s) * Matrix::Identity(n, n);
  Matrix moebius = denominator.transpose()
                       .partialPivLu()
                       .solve(numerator.transpose())
                       .transpose();
  return (moebius - cayley_cogenerator(a).cogenerator).norm();
}

}  // namespace vesselkit
