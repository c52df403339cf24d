#include "vesselkit/system_sim.hpp"

#include <cmath>

namespace vesselkit {

// ---------------------------------------------------------------------------
// BoundaryTriple

BoundaryTriple BoundaryTriple::zero(const GridSpec& grid, int dim_e,
                                    int dim_h) {
  BoundaryTriple t;
  t.grid = grid;
  t.y_past.assign(grid.zero_node() + 1, Vector::Zero(dim_e));
  t.h = Vector::Zero(dim_h);
  t.u_future.assign(grid.n - grid.zero_node(), Vector::Zero(dim_e));
  return t;
}

int BoundaryTriple::dim_e() const {
  return y_past.empty() ? 0 : static_cast<int>(y_past[0].size());
}

double BoundaryTriple::norm_squared() const {
  const double delta = grid.step();
  double sum = h.squaredNorm();
  for (std::size_t k = 0; k < y_past.size(); ++k) {
    double w = (static_cast<int>(k) == grid.zero_node()) ? 0.5 : 1.0;
    sum += w * delta * y_past[k].squaredNorm();
  }
  for (std::size_t k = 0; k < u_future.size(); ++k) {
    double w = (k == 0) ? 0.5 : 1.0;
    sum += w * delta * u_future[k].squaredNorm();
  }
  return sum;
}

BoundaryTriple& BoundaryTriple::operator-=(const BoundaryTriple& other) {
  if (!(grid == other.grid) || h.size() != other.h.size())
    throw Error(ErrorCode::DimensionMismatch, "triple arithmetic");
  for (std::size_t k = 0; k < y_past.size(); ++k) y_past[k] -= other.y_past[k];
  h -= other.h;
  for (std::size_t k = 0; k < u_future.size(); ++k)
    u_future[k] -= other.u_future[k];
  return *this;
}

BoundaryTriple& BoundaryTriple::operator+=(const BoundaryTriple& other) {
  if (!(grid == other.grid) || h.size() != other.h.size())
    throw Error(ErrorCode::DimensionMismatch, "triple arithmetic");
  for (std::size_t k = 0; k < y_past.size(); ++k) y_past[k] += other.y_past[k];
  h += other.h;
  for (std::size_t k = 0; k < u_future.size(); ++k)
    u_future[k] += other.u_future[k];
  return *this;
}

BoundaryTriple& BoundaryTriple::operator*=(Complex scale) {
  for (auto& v : y_past) v *= scale;
  h *= scale;
  for (auto& v : u_future) v *= scale;
  return *this;
}

// ---------------------------------------------------------------------------
// propagation

LineTrajectory propagate_state(const Vessel& v, const Vector& h,
                               const SampledSignal& u_line,
                               const RealVector& xi, const RealVector& eta) {
  if (h.size() != v.dim_h || u_line.dim() != v.dim_e)
    throw Error(ErrorCode::DimensionMismatch, "propagate_state");
  const GridSpec& grid = u_line.grid;
  const double delta = grid.step();
  const int n0 = grid.zero_node();

  Matrix gen = v.a_of(xi);
  Matrix step_fwd = expm(kI * delta * gen);
  Matrix step_bwd = expm(-kI * delta * gen);
  Matrix q = v.Phi.adjoint() * v.sigma_of(xi);  // Phi^* sigma(xi)

  LineTrajectory traj;
  traj.direction = xi;
  traj.offset = eta;
  traj.grid = grid;
  traj.u = u_line;
  traj.state.assign(grid.n, Vector::Zero(v.dim_h));

  traj.state[n0] = eta.cwiseAbs().maxCoeff() == 0.0
                       ? h
                       : Vector(expm(kI * v.a_of(eta)) * h);
  const Complex half_step = kI * 0.5 * delta;
  for (int k = n0; k + 1 < grid.n; ++k) {
    traj.state[k + 1] =
        step_fwd * (traj.state[k] - half_step * (q * u_line.values[k])) -
        half_step * (q * u_line.values[k + 1]);
  }
  for (int k = n0; k > 0; --k) {
    traj.state[k - 1] =
        step_bwd * (traj.state[k] + half_step * (q * u_line.values[k])) +
        half_step * (q * u_line.values[k - 1]);
  }

  traj.y = SampledSignal(grid, v.dim_e);
  for (int k = 0; k < grid.n; ++k)
    traj.y.values[k] = u_line.values[k] - kI * (v.Phi * traj.state[k]);
  return traj;
}

LineTrajectory extend_trajectory(const Vessel& v,
                                 const BoundaryTriple& triple) {
  if (triple.h.size() != v.dim_h || triple.dim_e() != v.dim_e)
    throw Error(ErrorCode::DimensionMismatch, "extend_trajectory");
  const GridSpec& grid = triple.grid;
  const double delta = grid.step();
  const int n0 = grid.zero_node();

  Matrix step_fwd = expm(kI * delta * v.A[0]);
  Matrix step_bwd_adj = expm(-kI * delta * v.A[0].adjoint());
  Matrix q = v.Phi.adjoint() * v.sigma[0];

  std::vector<Vector> x(grid.n, Vector::Zero(v.dim_h));
  x[n0] = triple.h;
  const Complex half_step = kI * 0.5 * delta;
  // forward system driven by u on t > 0
  for (int k = n0; k + 1 < grid.n; ++k) {
    const Vector& uk = triple.u_future[k - n0];
    const Vector& uk1 = triple.u_future[k + 1 - n0];
    x[k + 1] = step_fwd * (x[k] - half_step * (q * uk)) - half_step * (q * uk1);
  }
  // backward adjoint system driven by y on t < 0
  for (int k = n0; k > 0; --k) {
    const Vector& yk = triple.y_past[k];
    const Vector& yk1 = triple.y_past[k - 1];
    x[k - 1] = step_bwd_adj * (x[k] + half_step * (q * yk)) +
               half_step * (q * yk1);
  }

  LineTrajectory traj;
  traj.direction = RealVector::Zero(v.d);
  traj.direction(0) = 1.0;
  traj.offset = RealVector::Zero(v.d);
  traj.grid = grid;
  traj.state = std::move(x);
  traj.u = SampledSignal(grid, v.dim_e);
  traj.y = SampledSignal(grid, v.dim_e);
  // the shared zero node carries both one-sided values: u from the future
  // data, y from the past data
  for (int k = 0; k < grid.n; ++k) {
    traj.u.values[k] =
        k >= n0 ? triple.u_future[k - n0]
                : Vector(triple.y_past[k] + kI * (v.Phi * traj.state[k]));
    traj.y.values[k] =
        k <= n0 ? triple.y_past[k]
                : Vector(triple.u_future[k - n0] -
                         kI * (v.Phi * traj.state[k]));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// residuals

double energy_balance_residual(const LineTrajectory& traj, const Vessel& v) {
  const int n = traj.grid.n;
  const double delta = traj.grid.step();
  Matrix sx = v.sigma_of(traj.direction);

  auto flux = [&](const SampledSignal& f, int k) {
    return std::real(f.values[k].dot(sx * f.values[k]));
  };

  // D_k = ||x_k||^2 - F_k + G_k with trapezoid cumulative fluxes; the pairwise
  // balance residual is max D - min D.
  double d_value = traj.state[0].squaredNorm();
  double d_max = d_value, d_min = d_value;
  double x_max = traj.state[0].squaredNorm();
  double fu = flux(traj.u, 0), fy = flux(traj.y, 0);
  double cum_u = 0.0, cum_y = 0.0;
  for (int k = 1; k < n; ++k) {
    double fu1 = flux(traj.u, k), fy1 = flux(traj.y, k);
    cum_u += 0.5 * delta * (fu + fu1);
    cum_y += 0.5 * delta * (fy + fy1);
    fu = fu1;
    fy = fy1;
    d_value = traj.state[k].squaredNorm() - cum_u + cum_y;
    d_max = std::max(d_max, d_value);
    d_min = std::min(d_min, d_value);
    x_max = std::max(x_max, traj.state[k].squaredNorm());
  }
  return (d_max - d_min) / std::max(1e-300, x_max);
}

double system_residual(const LineTrajectory& traj, const Vessel& v) {
  const int n = traj.grid.n;
  const double delta = traj.grid.step();
  Matrix gen = v.a_of(traj.direction);
  Matrix q = v.Phi.adjoint() * v.sigma_of(traj.direction);

  double x_scale = 0.0;
  for (const auto& s : traj.state) x_scale = std::max(x_scale, s.norm());
  double scale = std::max(1.0, x_scale);

  double worst = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    Vector dx = (traj.state[k + 1] - traj.state[k - 1]) / (2.0 * delta);
    Vector res = kI * dx + gen * traj.state[k] - q * traj.u.values[k];
    worst = std::max(worst, res.norm() / scale);
  }
  for (int k = 0; k < n; ++k) {
    Vector res = traj.y.values[k] - traj.u.values[k] +
                 kI * (v.Phi * traj.state[k]);
    worst = std::max(worst, res.norm() / scale);
  }
  return worst;
}

double adjoint_trajectory_check(const LineTrajectory& traj, const Vessel& v) {
  Vessel adj = adjoint_vessel(v);
  LineTrajectory swapped;
  swapped.direction = traj.direction;
  swapped.offset = traj.offset;
  swapped.grid = traj.grid;
  swapped.u = traj.y;
  swapped.y = traj.u;
  swapped.state = traj.state;
  return system_residual(swapped, adj);
}

// ---------------------------------------------------------------------------
// origin matching

namespace {

// One-sided 2nd-order stencils at 0 in the direction `sign`.
void one_sided_jet(const std::function<Vector(double)>& f, double h,
                   double sign, Vector& value, Vector& d1, Vector& d2) {
  auto at = [&](double t) { return f(sign * t); };
  value = at(0.0);
  auto first = [&](double step) {
    return Vector((-3.0 * at(0.0) + 4.0 * at(step) - at(2.0 * step)) /
                  (2.0 * step) * sign);
  };
  auto second = [&](double step) {
    return Vector((2.0 * at(0.0) - 5.0 * at(step) + 4.0 * at(2.0 * step) -
                   at(3.0 * step)) /
                  (step * step));
  };
  // Richardson: error is O(h^2), combine h and h/2.
  d1 = (4.0 * first(h / 2) - first(h)) / 3.0;
  d2 = (4.0 * second(h / 2) - second(h)) / 3.0;
}

}  // namespace

BoundaryJet jet_from_callables(const std::function<Vector(double)>& u_future,
                               const std::function<Vector(double)>& y_past,
                               double step) {
  BoundaryJet jet;
  one_sided_jet(u_future, step, +1.0, jet.u0, jet.u1, jet.u2);
  one_sided_jet(y_past, step, -1.0, jet.y0, jet.y1, jet.y2);
  return jet;
}

BoundaryJet jet_from_trajectory(const LineTrajectory& traj) {
  const int n0 = traj.grid.zero_node();
  const double delta = traj.grid.step();
  auto u_future = [&](double t) {
    int k = n0 + static_cast<int>(std::lround(t / delta));
    return traj.u.values[k];
  };
  auto y_past = [&](double t) {
    int k = n0 + static_cast<int>(std::lround(t / delta));
    return traj.y.values[k];
  };
  return jet_from_callables(u_future, y_past, 4.0 * delta);
}

std::vector<double> k0_matching_residual(const Vessel& v, const Vector& h,
                                         const BoundaryJet& jet) {
  Matrix pp = v.Phi * v.Phi.adjoint();
  const Matrix& a1 = v.A[0];
  double scale = std::max(
      1.0, std::max({jet.u0.norm(), jet.y0.norm(), jet.u1.norm(),
                     jet.y1.norm(), jet.u2.norm(), jet.y2.norm(), h.norm()}));

  Vector r1 = jet.u0 - jet.y0 - kI * (v.Phi * h);
  Vector r2 = jet.u1 - jet.y1 - (pp * jet.u0 - v.Phi * (a1 * h));
  Vector r3 = jet.u2 - jet.y2 -
              (pp * jet.u1 - kI * (v.Phi * (a1 * (a1 * h))) +
               kI * (v.Phi * (a1 * (v.Phi.adjoint() * jet.u0))));
  return {r1.norm() / scale, r2.norm() / scale, r3.norm() / scale};
}

}  // namespace vesselkit
