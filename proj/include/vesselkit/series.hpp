#pragma once

// Discrete-time compatibility recurrence: dense multi-index coefficient
// tables, the closed-form shift solution, residual checks of the difference
// equations, the analytic polyradius bound and truncated evaluation.

#include <optional>
#include <vector>

#include "vesselkit/linalg.hpp"
#include "vesselkit/vessel.hpp"

namespace vesselkit {

// Dense enumeration of multi-indices n in N^d with |n| <= degree, graded
// lexicographic. Provides O(1)-ish lookup through a packed rank map.
class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(int d, int degree);

  int d() const { return d_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<int>& at(int rank) const { return indices_[rank]; }

  // Rank of a multi-index, -1 if outside the set.
  int rank(const std::vector<int>& n) const;
  // Rank of n + e_j, -1 if it leaves the set.
  int rank_shifted(const std::vector<int>& n, int j) const;

 private:
  int d_ = 0;
  int degree_ = 0;
  std::vector<std::vector<int>> indices_;
  std::vector<int> offsets_;  // lookup table, mixed-radix packing
  int pack(const std::vector<int>& n) const;
};

struct PowerSeriesSolution {
  int d = 0;
  int degree = 0;
  int dim_e = 0;
  MultiIndexSet support;
  std::vector<Vector> coefficients;  // parallel to support
  std::optional<RealVector> polyradius;

  const Vector& at(const std::vector<int>& n) const;
  double max_coefficient_norm() const;
};

struct AnalyticInitialData {
  std::vector<Vector> b;       // axis coefficients b(0..)
  std::optional<double> radius;   // known radius of convergence
  std::optional<double> bound;    // M with ||b(m)|| <= M / r^m for r < radius
};

// a(n) = (alpha_2 d_1 + i beta_2)^{n_2} ... (alpha_d d_1 + i beta_d)^{n_d} b(n_1),
// realized by the shift recurrence a(n + e_k) = alpha_k a(n + e_1) + i beta_k a(n).
// Requires b entries up to index `degree`.
PowerSeriesSolution solve_discrete(const NormalizedPencil& pencil,
                                   const AnalyticInitialData& init,
                                   int degree);

// Max over all n, j < k of || sigma_k a(n+e_j) - sigma_j a(n+e_k) + i gamma_jk a(n) ||,
// normalized by the max stored coefficient norm.
double check_discrete_compat(const PowerSeriesSolution& sol, const Vessel& v);

// Same residual against pencil data (sigma_1 = I, gamma_1k = beta_k and
// gamma_jk = alpha_j beta_k - alpha_k beta_j for the off-axis pairs).
double check_discrete_compat(const PowerSeriesSolution& sol,
                             const NormalizedPencil& pencil);

// (R, R/(C(R+1)), ..., R/(C(R+1))) with C = max_j max(||alpha_j||, ||beta_j||);
// C below 1e-14 is treated as an unbounded polyradius.
RealVector analytic_polyradius(double radius, const NormalizedPencil& pencil);

// Coefficient growth bound of the analytic solution:
// C^{|n|-n1} M (1/r)^{n1} (1 + 1/r)^{|n|-n1}.
double analytic_growth_bound(const std::vector<int>& n, double c, double m,
                             double r);

struct SeriesValue {
  Vector value;
  double tail_estimate = 0.0;  // geometric estimate from the last shells
};

// Truncated evaluation sum_{|n| <= D} a(n) t^n. If the solution carries a
// polyradius, t must lie within half of it componentwise.
SeriesValue evaluate_series(const PowerSeriesSolution& sol,
                            const RealVector& t);

}  // namespace vesselkit
