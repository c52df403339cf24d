#pragma once

// Time-domain simulation of the conservative i/s/o system along lines:
// Duhamel state propagation with trapezoidal quadrature, two-sided trajectory
// extension from (y_past, h, u_future), energy balance and smoothness
// matching at the origin.

#include <functional>

#include "vesselkit/grid.hpp"
#include "vesselkit/vessel.hpp"

namespace vesselkit {

// State/input/output samples along the line tau -> xi tau + eta.
struct LineTrajectory {
  RealVector direction;  // xi
  RealVector offset;     // eta
  GridSpec grid;
  SampledSignal u;             // input, C^m per node
  SampledSignal y;             // output, y = u - i Phi x
  std::vector<Vector> state;   // x, C^n per node
};

// Element of L^2(R_-, E) + H + L^2(R_+, E) on a split grid. The node at t=0
// belongs to both halves with half weight; y_past covers nodes 0..N/2 and
// u_future covers nodes N/2..N-1.
struct BoundaryTriple {
  GridSpec grid;
  std::vector<Vector> y_past;   // N/2 + 1 entries, t <= 0
  Vector h;
  std::vector<Vector> u_future; // N/2 entries, t >= 0

  static BoundaryTriple zero(const GridSpec& grid, int dim_e, int dim_h);
  int dim_e() const;
  double norm_squared() const;
  double norm() const { return std::sqrt(norm_squared()); }

  BoundaryTriple& operator-=(const BoundaryTriple& other);
  BoundaryTriple& operator+=(const BoundaryTriple& other);
  BoundaryTriple& operator*=(Complex scale);
};

// Solves i x' + (xi . A) x = Phi^* sigma(xi) u along the line with
// x(tau = 0) = e^{i eta . A} h, marching both ways from the zero node with
// the trapezoidal Duhamel rule; fills y through the output equation.
LineTrajectory propagate_state(const Vessel& v, const Vector& h,
                               const SampledSignal& u_line,
                               const RealVector& xi, const RealVector& eta);

// Unique trajectory matching (y_past, h, u_future) on the first axis:
// forward system with u for t > 0, backward adjoint system with y for t < 0;
// u carries y + i Phi x on the past half, y carries u - i Phi x on the
// future half.
LineTrajectory extend_trajectory(const Vessel& v, const BoundaryTriple& triple);

// max over node pairs (a, b) of
// | ||x(b)||^2 - ||x(a)||^2 - int_a^b <sigma(xi) u, u> + int_a^b <sigma(xi) y, y> |
// normalized by max ||x||^2, trapezoid cumulative sums.
double energy_balance_residual(const LineTrajectory& traj, const Vessel& v);

// Centered-difference residual of the system equations on the trajectory
// (state equation at interior nodes, output equation everywhere).
double system_residual(const LineTrajectory& traj, const Vessel& v);

// Residual of the adjoint system evaluated on (y, x, u) with the adjoint
// vessel.
double adjoint_trajectory_check(const LineTrajectory& traj, const Vessel& v);

// One-sided limits and derivatives of u (t -> 0+) and y (t -> 0-).
struct BoundaryJet {
  Vector u0, u1, u2;
  Vector y0, y1, y2;
};

// Second-order one-sided finite differences at step `h`, Richardson refined.
BoundaryJet jet_from_callables(const std::function<Vector(double)>& u_future,
                               const std::function<Vector(double)>& y_past,
                               double step);

BoundaryJet jet_from_trajectory(const LineTrajectory& traj);

// Residuals of the three matching conditions a smooth dilation-space vector
// satisfies at the origin; expects a sigma_1-normalized vessel.
std::vector<double> k0_matching_residual(const Vessel& v, const Vector& h,
                                         const BoundaryJet& jet);

}  // namespace vesselkit
