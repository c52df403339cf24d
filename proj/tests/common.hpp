#pragma once

// Shared fixtures and oracles for the test suites.

#include "vesselkit/dilation.hpp"
#include "vesselkit/fixtures.hpp"

namespace vesselkit {
namespace testing {

inline Matrix mat1(Complex a) {
  Matrix m(1, 1);
  m << a;
  return m;
}

// The scalar classical vessel: A = [i/2], Phi = [1], sigma = [1].
inline Vessel scalar_vessel(Complex a = Complex(0.0, 0.5)) {
  Vessel v;
  v.d = 1;
  v.dim_h = 1;
  v.dim_e = 1;
  v.A = {mat1(a)};
  v.Phi = Matrix::Identity(1, 1);
  v.sigma = {Matrix::Identity(1, 1)};
  v.gamma = GammaTable(1, 1);
  v.gamma_star = GammaTable(1, 1);
  return v;
}

inline Vessel tensor_vessel(std::uint64_t seed, int d, int factor_dim) {
  return make_strict_vessel(fixtures::tensor_tuple(seed, d, factor_dim));
}

inline Normalized normalized_tensor(std::uint64_t seed, int d,
                                    int factor_dim) {
  Vessel v = tensor_vessel(seed, d, factor_dim);
  return normalize(v, RealVector::Ones(d));
}

// Smooth element of the dilation space: Gaussian bumps well separated from
// the origin split and the grid edge, h = 0 so the extension is C^2 at 0.
inline DilationVector smooth_vector(const DilationConfig& cfg,
                                    std::uint64_t seed) {
  const GridSpec& g = cfg.grid;
  Rng rng(seed);
  int m = cfg.vessel().dim_e;
  Vector dir = rng.complex_gaussian(m, 1).col(0);
  dir /= dir.norm();
  double center = g.half_width / 4.0;
  double width = g.half_width / 16.0;
  SampledSignal bump_u = gaussian_signal(g, center, width, dir);
  SampledSignal bump_y = gaussian_signal(g, -center, width, dir);
  DilationVector vec;
  vec.triple = BoundaryTriple::zero(g, m, cfg.vessel().dim_h);
  const int n0 = g.zero_node();
  for (int k = 0; k <= n0; ++k) vec.triple.y_past[k] = bump_y.values[k];
  for (int k = n0; k < g.n; ++k)
    vec.triple.u_future[k - n0] = bump_u.values[k];
  return vec;
}

// Classical RK4 on i x' + A x = q u(t), x(0) = h, marching the grid from the
// zero node with exact u evaluations (including midpoints).
inline std::vector<Vector> rk4_state(const Matrix& a, const Matrix& q,
                                     const std::function<Vector(double)>& u,
                                     const Vector& h, const GridSpec& grid) {
  auto rhs = [&](double t, const Vector& x) {
    return Vector(kI * (a * x) - kI * (q * u(t)));
  };
  std::vector<Vector> x(grid.n, Vector::Zero(h.size()));
  const int n0 = grid.zero_node();
  const double dt = grid.step();
  x[n0] = h;
  auto step = [&](const Vector& xk, double t, double sign) {
    double hh = sign * dt;
    Vector k1 = rhs(t, xk);
    Vector k2 = rhs(t + hh / 2, Vector(xk + hh / 2 * k1));
    Vector k3 = rhs(t + hh / 2, Vector(xk + hh / 2 * k2));
    Vector k4 = rhs(t + hh, Vector(xk + hh * k3));
    return Vector(xk + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
  };
  for (int k = n0; k + 1 < grid.n; ++k) x[k + 1] = step(x[k], grid.node(k), 1.0);
  for (int k = n0; k > 0; --k) x[k - 1] = step(x[k], grid.node(k), -1.0);
  return x;
}

}  // namespace testing
}  // namespace vesselkit
