#include "vesselkit/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vesselkit {

// ---------------------------------------------------------------------------
// MultiIndexSet

MultiIndexSet::MultiIndexSet(int d, int degree) : d_(d), degree_(degree) {
  std::vector<int> current(d, 0);
  // graded lexicographic enumeration
  for (int total = 0; total <= degree; ++total) {
    std::fill(current.begin(), current.end(), 0);
    current[0] = total;
    while (true) {
      indices_.push_back(current);
      // next composition of `total` into d parts, colex-style walk
      int i = 0;
      while (i < d - 1 && current[i] == 0) ++i;
      if (i == d - 1) break;
      int head = current[i];
      current[i] = 0;
      current[0] = head - 1;
      current[i + 1] += 1;
    }
    if (d == 1) continue;
  }
  offsets_.assign(static_cast<std::size_t>(std::pow(degree + 2, d)), -1);
  for (int r = 0; r < size(); ++r) offsets_[pack(indices_[r])] = r;
}

int MultiIndexSet::pack(const std::vector<int>& n) const {
  int code = 0;
  for (int j = 0; j < d_; ++j) code = code * (degree_ + 2) + n[j];
  return code;
}

int MultiIndexSet::rank(const std::vector<int>& n) const {
  int total = 0;
  for (int v : n) {
    if (v < 0 || v > degree_) return -1;
    total += v;
  }
  if (total > degree_) return -1;
  return offsets_[pack(n)];
}

int MultiIndexSet::rank_shifted(const std::vector<int>& n, int j) const {
  std::vector<int> shifted = n;
  shifted[j] += 1;
  return rank(shifted);
}

// ---------------------------------------------------------------------------
// PowerSeriesSolution

const Vector& PowerSeriesSolution::at(const std::vector<int>& n) const {
  int r = support.rank(n);
  if (r < 0)
    throw Error(ErrorCode::OutsideDomain, "coefficient outside stored degree");
  return coefficients[r];
}

double PowerSeriesSolution::max_coefficient_norm() const {
  double worst = 0.0;
  for (const auto& c : coefficients) worst = std::max(worst, c.norm());
  return worst;
}

// ---------------------------------------------------------------------------
// solver

PowerSeriesSolution solve_discrete(const NormalizedPencil& pencil,
                                   const AnalyticInitialData& init,
                                   int degree) {
  const int d = pencil.d;
  const int m = pencil.dim_e;
  // off-axis shifts consume axis data up to |n|, so b must reach `degree`
  if (static_cast<int>(init.b.size()) < degree + 1)
    throw Error(ErrorCode::InsufficientInitialData,
                "solve_discrete: need axis coefficients b(0.." +
                    std::to_string(degree) + ")");

  PowerSeriesSolution sol;
  sol.d = d;
  sol.degree = degree;
  sol.dim_e = m;
  sol.support = MultiIndexSet(d, degree);
  sol.coefficients.assign(sol.support.size(), Vector::Zero(m));

  // fill in increasing order of off-axis weight |n| - n_1
  std::vector<std::vector<int>> by_weight(degree + 1);
  for (int r = 0; r < sol.support.size(); ++r) {
    const auto& n = sol.support.at(r);
    int weight = std::accumulate(n.begin(), n.end(), 0) - n[0];
    by_weight[weight].push_back(r);
  }
  for (int r : by_weight[0]) {
    const auto& n = sol.support.at(r);
    sol.coefficients[r] = init.b[n[0]];
  }
  for (int weight = 1; weight <= degree; ++weight) {
    for (int r : by_weight[weight]) {
      std::vector<int> n = sol.support.at(r);
      int k = d - 1;
      while (n[k] == 0) --k;  // largest off-axis index, k >= 1 here
      n[k] -= 1;
      int base = sol.support.rank(n);
      n[0] += 1;
      int shifted = sol.support.rank(n);
      sol.coefficients[r] = pencil.alpha[k] * sol.coefficients[shifted] +
                            kI * (pencil.beta[k] * sol.coefficients[base]);
    }
  }

  if (init.radius) {
    sol.polyradius = analytic_polyradius(*init.radius, pencil);
  }
  return sol;
}

// ---------------------------------------------------------------------------
// residuals

namespace {

template <typename SigmaFn, typename GammaFn>
double compat_residual(const PowerSeriesSolution& sol, int d, SigmaFn sigma,
                       GammaFn gamma) {
  double scale = std::max(1.0, sol.max_coefficient_norm());
  double worst = 0.0;
  for (int r = 0; r < sol.support.size(); ++r) {
    const auto& n = sol.support.at(r);
    for (int j = 0; j < d; ++j) {
      int rj = sol.support.rank_shifted(n, j);
      if (rj < 0) continue;
      for (int k = j + 1; k < d; ++k) {
        int rk = sol.support.rank_shifted(n, k);
        if (rk < 0) continue;
        Vector res = sigma(k) * sol.coefficients[rj] -
                     sigma(j) * sol.coefficients[rk] +
                     kI * (gamma(j, k) * sol.coefficients[r]);
        worst = std::max(worst, res.norm() / scale);
      }
    }
  }
  return worst;
}

}  // namespace

double check_discrete_compat(const PowerSeriesSolution& sol, const Vessel& v) {
  if (v.dim_e != sol.dim_e || v.d != sol.d)
    throw Error(ErrorCode::DimensionMismatch, "check_discrete_compat");
  return compat_residual(
      sol, v.d, [&](int j) -> const Matrix& { return v.sigma[j]; },
      [&](int j, int k) { return v.gamma.get(j, k); });
}

double check_discrete_compat(const PowerSeriesSolution& sol,
                             const NormalizedPencil& pencil) {
  if (pencil.dim_e != sol.dim_e || pencil.d != sol.d)
    throw Error(ErrorCode::DimensionMismatch, "check_discrete_compat");
  return compat_residual(
      sol, pencil.d,
      [&](int j) -> const Matrix& { return pencil.alpha[j]; },
      [&](int j, int k) -> Matrix {
        if (j == 0) return pencil.beta[k];
        return pencil.alpha[j] * pencil.beta[k] -
               pencil.alpha[k] * pencil.beta[j];
      });
}

// ---------------------------------------------------------------------------
// analytic bound

RealVector analytic_polyradius(double radius, const NormalizedPencil& pencil) {
  if (radius <= 0.0)
    throw Error(ErrorCode::OutsideDomain, "analytic_polyradius: R <= 0");
  RealVector poly(pencil.d);
  poly(0) = radius;
  double c = 0.0;
  for (int j = 1; j < pencil.d; ++j) {
    c = std::max(c, op_norm(pencil.alpha[j]));
    c = std::max(c, op_norm(pencil.beta[j]));
  }
  double off_axis = c < 1e-14 ? std::numeric_limits<double>::infinity()
                              : radius / (c * (radius + 1.0));
  for (int j = 1; j < pencil.d; ++j) poly(j) = off_axis;
  return poly;
}

double analytic_growth_bound(const std::vector<int>& n, double c, double m,
                             double r) {
  int total = std::accumulate(n.begin(), n.end(), 0);
  int weight = total - n[0];
  return std::pow(c, weight) * m * std::pow(1.0 / r, n[0]) *
         std::pow(1.0 + 1.0 / r, weight);
}

// ---------------------------------------------------------------------------
// evaluation

SeriesValue evaluate_series(const PowerSeriesSolution& sol,
                            const RealVector& t) {
  if (t.size() != sol.d)
    throw Error(ErrorCode::DimensionMismatch, "evaluate_series: t size");
  if (sol.polyradius) {
    for (int j = 0; j < sol.d; ++j)
      if (std::abs(t(j)) > 0.5 * (*sol.polyradius)(j))
        throw Error(ErrorCode::OutsideDomain,
                    "evaluate_series: t outside half the polyradius");
  }

  SeriesValue out;
  out.value = Vector::Zero(sol.dim_e);
  std::vector<double> shell(sol.degree + 1, 0.0);
  for (int r = 0; r < sol.support.size(); ++r) {
    const auto& n = sol.support.at(r);
    double monomial = 1.0;
    int total = 0;
    for (int j = 0; j < sol.d; ++j) {
      monomial *= std::pow(t(j), n[j]);
      total += n[j];
    }
    out.value += monomial * sol.coefficients[r];
    shell[total] += std::abs(monomial) * sol.coefficients[r].norm();
  }
  if (sol.degree >= 1) {
    double last = shell[sol.degree];
    double prev = shell[sol.degree - 1];
    double q = prev > 0.0 ? std::min(0.9, last / prev) : 0.5;
    out.tail_estimate = last * q / (1.0 - q);
  }
  return out;
}

}  // namespace vesselkit
