#pragma once

// Commutative operator vessels: data types, the strict embedding of a
// commuting dissipative tuple, algebraic condition checkers (colligation,
// vessel conditions, the very-reasonable family and its output twin),
// coordinate changes, the positivity cone, sigma-normalization and the
// Cayley cogenerator.

#include <vector>

#include "vesselkit/linalg.hpp"
#include "vesselkit/report.hpp"

namespace vesselkit {

// ---------------------------------------------------------------------------
// commuting dissipative tuple

struct CommutingTuple {
  int d = 0;       // number of operators
  int dim_h = 0;   // state dimension
  std::vector<Matrix> A;  // d matrices, dim_h x dim_h

  // Residuals of pairwise commutators and dissipativity margins.
  ConditionReport check(const Tolerances& tol = {}) const;
  void require_valid(const Tolerances& tol = {}) const;
};

// ---------------------------------------------------------------------------
// antisymmetric two-index table: entries stored for j < k only, gamma(k, j)
// materialized as -gamma(j, k), diagonal is zero. Indices are 0-based.

class GammaTable {
 public:
  GammaTable() = default;
  GammaTable(int d, int dim_e);

  int d() const { return d_; }
  int dim_e() const { return dim_e_; }

  void set(int j, int k, const Matrix& value);
  Matrix get(int j, int k) const;  // antisymmetry exact by construction
  const Matrix& stored(int j, int k) const;  // requires j < k

  // Maximum Hermiticity defect over stored entries, Frobenius.
  double hermiticity_defect() const;
  double max_norm() const;

 private:
  int index(int j, int k) const;  // j < k
  int d_ = 0;
  int dim_e_ = 0;
  std::vector<Matrix> entries_;  // lexicographic over pairs j < k
};

// ---------------------------------------------------------------------------
// vessel

struct Vessel {
  int d = 0;
  int dim_h = 0;  // n
  int dim_e = 0;  // m
  std::vector<Matrix> A;      // n x n
  Matrix Phi;                 // m x n, maps state space into signal space
  std::vector<Matrix> sigma;  // m x m Hermitian
  GammaTable gamma;           // input side
  GammaTable gamma_star;      // output side
  bool degenerate_signal_space = false;  // dim_e == 0 embedding of a
                                         // selfadjoint tuple

  Matrix sigma_of(const RealVector& xi) const;    // sum xi_j sigma_j
  Matrix a_of(const RealVector& xi) const;        // sum xi_j A_j
  void require_shapes() const;
};

// ---------------------------------------------------------------------------
// sigma_1-normalized pencil data: alpha_1 = I and beta_1 = 0 exactly, all
// entries Hermitian. Drives the compatibility recurrence and the transport.

struct NormalizedPencil {
  int d = 0;
  int dim_e = 0;
  std::vector<Matrix> alpha;  // alpha[0] = I
  std::vector<Matrix> beta;   // beta[0] = 0
  RealVector origin_direction;  // xi_0 whose sigma(xi_0) was scaled to I

  Matrix alpha_of(const RealVector& x) const;
  Matrix beta_of(const RealVector& x) const;
  // s alpha(x) + beta(x), Hermitian for real arguments.
  Matrix pencil_at(const RealVector& x, double s) const;

  // Hermiticity, alpha[0] = I, beta[0] = 0, and pencil commutativity at
  // s in {0, 1, -1, 0.37281...} (fixed pseudo-random probe).
  ConditionReport check(const Tolerances& tol = {}) const;
};

// ---------------------------------------------------------------------------
// operations

// Embeds a commuting tuple into its strict vessel. The signal space is an
// orthonormal basis of the span of all columns of (A_j - A_j^*)/i; rank is
// decided by singular values > rank_tol * sigma_max. When the span is all of
// C^n the standard basis is kept, so Phi = I. A selfadjoint tuple yields the
// valid empty-signal-space vessel with degenerate_signal_space set.
Vessel make_strict_vessel(const CommutingTuple& tuple, double rank_tol = 1e-10,
                          const Tolerances& tol = {});

// Residuals for colligation, both vessel conditions, linkage, Hermiticity,
// antisymmetry (by construction) and pairwise commutativity of A.
ConditionReport check_vessel(const Vessel& v, double tol);

// Direction for the very-reasonable checks: a basis index or a real vector
// (the vessel is coordinate-changed so the vector becomes the first axis).
struct Direction {
  static Direction axis(int index) { return Direction{index, {}}; }
  static Direction vector(RealVector xi) { return Direction{-1, std::move(xi)}; }
  int index = 0;
  RealVector xi;
};

// The three commutation conditions plus the elimination identity
// gamma_jk = sigma_j sigma(xi)^{-1} gamma_xik - sigma_k sigma(xi)^{-1} gamma_xij.
// The third condition is flagged redundant whenever the fourth passes.
ConditionReport check_vr(const Vessel& v, const Direction& direction,
                         double tol);
inline ConditionReport check_vr(const Vessel& v, double tol) {
  return check_vr(v, Direction::axis(0), tol);
}

// Output-side twin of check_vr in the first axis direction.
ConditionReport check_vr_star(const Vessel& v, double tol);

// (H, E, -Phi, A_j^*, -sigma_j, -gamma*_jk, -gamma_jk); an exact involution.
Vessel adjoint_vessel(const Vessel& v);

// A_j^T = rho(T e_j), sigma_j^T = sigma(T e_j), gamma^T = gamma(wedge^2 T);
// vessel conditions are equivariant under real invertible T.
Vessel coordinate_change(const Vessel& v, const RealMatrix& t);

// lambda_min(sigma(xi)); xi lies in the positivity cone iff the margin > 0.
double pos_cone_margin(const Vessel& v, const RealVector& xi);

// VR in a usable direction, cone non-emptiness at the all-ones direction and
// closure membership of each axis via margins at e_j + eps * ones.
ConditionReport dissipative_embedding_report(const Vessel& v, double tol);

struct Normalized {
  Vessel vessel;          // sigma_1 = I to rounding
  NormalizedPencil pencil;  // input-side pencil (beta from gamma_{1j})
};

// Coordinate-changes xi0 to the first axis and rescales the signal space by
// G^{-1/2}, G = sigma(xi0), so sigma_1 becomes the identity.
Normalized normalize(const Vessel& v, const RealVector& xi0,
                     const Tolerances& tol = {});

// Output-side pencil of a normalized vessel: alpha as in the input pencil,
// beta_j = gamma*_{1j}.
NormalizedPencil output_pencil(const Normalized& nv);

// Builds the full VR vessel from A, Phi, all sigma_j and the first row
// gamma_{1j}; remaining gamma_jk come from the elimination identity and
// gamma*_jk from linkage.
Vessel complete_partial_vessel(const CommutingTuple& tuple, const Matrix& phi,
                               const std::vector<Matrix>& sigma,
                               const std::vector<Matrix>& gamma_first_row,
                               double tol);

struct WeaklyStrictReport {
  bool weakly_strict = false;
  Matrix kernel_basis;  // orthonormal basis of W = cap_j ker Phi^* sigma_j
  double gap = 0.0;     // smallest singular value of the stacked map
};

WeaklyStrictReport weakly_strict_report(const Vessel& v, double tol);

struct CayleyResult {
  Matrix cogenerator;          // (A - iI)(A + iI)^{-1}
  double norm = 0.0;           // operator norm of the cogenerator
  double unitary_defect = 0.0; // ||T^*T - I||
};

// Cayley cogenerator of the semigroup generated by a dissipative A.
CayleyResult cayley_cogenerator(const Matrix& a, double tol = 1e-10);

// Diagnostic Moebius recovery phi_s(e^{isA}) at a small s > 0; returns the
// distance to the cogenerator (expected O(s)).
double cayley_recovery_gap(const Matrix& a, double s);

}  // namespace vesselkit
