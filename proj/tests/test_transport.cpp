#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "vesselkit/transport.hpp"

using namespace vesselkit;
using namespace vesselkit::testing;

namespace {

// d = 2 pencil with a dense positive alpha_2; every d = 2 pencil commutes
// with itself frequency-wise, so the group law is exact in the continuum.
NormalizedPencil dense_pencil(std::uint64_t seed, int m) {
  Rng rng(seed);
  NormalizedPencil p;
  p.d = 2;
  p.dim_e = m;
  p.origin_direction = RealVector::Zero(2);
  p.origin_direction(0) = 1.0;
  p.alpha = {Matrix::Identity(m, m), rng.positive_definite(m, 0.3)};
  p.beta = {Matrix::Zero(m, m), rng.hermitian_gaussian(m)};
  return p;
}

SampledSignal random_smooth(const GridSpec& g, int m, std::uint64_t seed,
                            double center = 0.0, double width = 1.5) {
  Rng rng(seed);
  Vector dir = rng.complex_gaussian(m, 1).col(0);
  dir /= dir.norm();
  return gaussian_signal(g, center, width, dir);
}

}  // namespace

TEST_CASE("pi representation") {
  NormalizedPencil p = dense_pencil(1, 2);
  GridSpec g(512, 16.0);
  SampledSignal f = random_smooth(g, 2, 2);

  SUBCASE("zero maps to zero and t = 0 is the identity") {
    SampledSignal zero(g, 2);
    CHECK(apply_pi(p, RealVector::Zero(2), zero).norm() == 0.0);
    CHECK((apply_pi(p, RealVector::Zero(2), f) - f).norm() < 1e-12);
  }
  SUBCASE("first-axis action is the grid shift") {
    RealVector t = RealVector::Zero(2);
    t(0) = 16 * g.step();
    CHECK((apply_pi(p, t, f) - roll(f, 16)).norm() < 1e-12);
  }
  SUBCASE("unitary with the group law") {
    RealVector ta(2), tb(2);
    ta << 0.8, -0.45;
    tb << -0.3, 0.7;
    SampledSignal pf = apply_pi(p, ta, f);
    CHECK(std::abs(pf.norm() / f.norm() - 1.0) < 1e-10);
    SampledSignal composed = apply_pi(p, ta, apply_pi(p, tb, f));
    SampledSignal direct = apply_pi(p, RealVector(ta + tb), f);
    CHECK((composed - direct).norm() / f.norm() < 1e-9);
  }
  SUBCASE("aliasing risk is flagged") {
    bool risk = false;
    apply_pi(p, RealVector::Zero(2), gaussian_signal(g, 15.0, 3.0, f.values[0]),
             &risk);
    CHECK(risk);
  }
}

TEST_CASE("spectrum cache reconstructs the pencil") {
  NormalizedPencil p = dense_pencil(3, 3);
  GridSpec g(256, 10.0);
  RealVector x(2);
  x << 1.0, 0.6;
  SpectrumCache cache(p, GridSpec(g.n, g.nyquist()), x);
  CHECK(cache.reconstruction_defect(p) < 1e-12);
}

TEST_CASE("identity transport and the fast path") {
  NormalizedPencil p = dense_pencil(4, 2);
  GridSpec g(512, 16.0);
  SampledSignal f = random_smooth(g, 2, 5);
  RealVector e1(2), zero(2);
  e1 << 1.0, 0.0;
  zero.setZero();
  LambdaFlags flags;
  SampledSignal out = lambda_op(p, e1, zero, f, g, &flags);
  CHECK(flags.fast_path);
  CHECK((out - f).norm() / f.norm() < 1e-10);
}

TEST_CASE("lambda against the direct Riemann oracle") {
  NormalizedPencil p = dense_pencil(6, 2);
  GridSpec g(256, 12.0);
  SampledSignal f = random_smooth(g, 2, 6);
  RealVector x(2), y(2);
  x << 1.0, 0.8;
  y << 0.2, -0.4;
  SampledSignal out = lambda_op(p, x, y, f, g);

  SampledSignal fhat = forward_fft(f);
  Matrix ax = p.alpha_of(x), bx = p.beta_of(x);
  Matrix ay = p.alpha_of(y), by = p.beta_of(y);
  double worst = 0.0;
  for (int l = 0; l < g.n; l += 37) {
    Vector acc = Vector::Zero(2);
    for (int k = 0; k < g.n; ++k) {
      double s = fhat.grid.node(k);
      acc += herm_phase(s * ax + bx, g.node(l)) *
             (herm_phase(s * ay + by, 1.0) * fhat.values[k]);
    }
    acc *= fhat.grid.step() / std::sqrt(2.0 * M_PI);
    worst = std::max(worst, (acc - out.values[l]).norm());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("transport composes with the representation") {
  // Lambda(x, y) pi(t) = Lambda(x, y + t); on the first axis this is the
  // grid shift of the transported signal
  NormalizedPencil p = dense_pencil(7, 2);
  GridSpec g(512, 16.0);
  SampledSignal f = random_smooth(g, 2, 7, -1.0, 1.2);
  RealVector x(2), zero(2);
  x << 1.0, 0.5;
  zero.setZero();
  int nodes = 24;
  RealVector t = RealVector::Zero(2);
  t(0) = nodes * g.step();
  SampledSignal lhs = lambda_op(p, x, zero, apply_pi(p, t, f), g);
  SampledSignal shifted_y = lambda_op(p, x, t, f, g);
  CHECK((lhs - shifted_y).norm() / f.norm() < 1e-9);

  // intertwining with the basis directions: transport then shift
  RealVector e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  SampledSignal a = lambda_op(p, e1, zero, apply_pi(p, t, f), g);
  SampledSignal b = roll(lambda_op(p, e1, zero, f, g), nodes);
  CHECK((a - b).norm() / f.norm() < 1e-8);
  RealVector t2 = RealVector::Zero(2);
  t2(1) = nodes * g.step();
  SampledSignal a2 = lambda_op(p, e2, zero, apply_pi(p, t2, f), g);
  SampledSignal b2 = roll(lambda_op(p, e2, zero, f, g), nodes);
  CHECK((a2 - b2).norm() / f.norm() < 1e-8);
}

TEST_CASE("results do not depend on the worker count") {
  NormalizedPencil p = dense_pencil(9, 2);
  GridSpec g(256, 12.0);
  SampledSignal f = random_smooth(g, 2, 21);
  RealVector x(2), zero(2);
  x << 1.0, 0.8;
  zero.setZero();
  ::setenv("VESSELKIT_THREADS", "1", 1);
  SampledSignal serial = lambda_op(p, x, zero, f, g);
  ::setenv("VESSELKIT_THREADS", "3", 1);
  SampledSignal parallel = lambda_op(p, x, zero, f, g);
  ::unsetenv("VESSELKIT_THREADS");
  CHECK((serial - parallel).norm() == 0.0);
}

TEST_CASE("weighted norms split exactly") {
  GridSpec g(256, 8.0);
  SampledSignal f = random_smooth(g, 2, 8);
  Rng rng(9);
  Matrix w = rng.positive_definite(2, 0.1);
  SplitNorms n = weighted_norms(f, w, 0.0);
  CHECK(n.full == n.left + n.right);
  CHECK(weighted_norms(f, Matrix::Zero(2, 2), 0.0).full == 0.0);

  // even signal with identity weight splits in half
  Vector dir(1);
  dir << 1.0;
  SampledSignal even = gaussian_signal(g, 0.0, 1.0, dir);
  SplitNorms ne = weighted_norms(even, Matrix::Identity(1, 1), 0.0);
  CHECK(ne.left == doctest::Approx(ne.right).epsilon(1e-12));
}

TEST_CASE("transport is isometric onto the weighted space") {
  Normalized nv = normalized_tensor(4, 2, 2);
  GridSpec g(1024, 20.0);
  // mild direction keeps every branch image of the packet outside the window
  SampledSignal f = random_smooth(g, nv.pencil.dim_e, 10, -5.0, 1.0);
  RealVector x(2), zero(2);
  x << 1.0, 0.25;
  zero.setZero();
  REQUIRE(lambda_min(nv.pencil.alpha_of(x)) > 0.1);
  SampledSignal out = lambda_op(nv.pencil, x, zero, f, g);
  SplitNorms n = weighted_norms(out, nv.pencil.alpha_of(x), 0.0);
  CHECK(std::abs(n.full / f.norm_squared() - 1.0) < 5e-6);
}

TEST_CASE("causal isometry residuals") {
  Normalized nv = normalized_tensor(4, 2, 2);
  GridSpec g(1024, 20.0);
  RealVector x(2), e1(2), zero(2), y(2);
  x << 1.0, 0.25;
  e1 << 1.0, 0.0;
  zero.setZero();
  y << 0.15, -0.35;
  SampledSignal f = random_smooth(g, nv.pencil.dim_e, 11, -5.0, 1.0);

  SUBCASE("identical directions vanish exactly") {
    CausalResiduals same = causal_isometry_check(nv.pencil, x, x, zero, f);
    CHECK(same.positive == 0.0);
    CHECK(same.negative == 0.0);
  }
  SUBCASE("cone directions against the first axis") {
    CausalResiduals res = causal_isometry_check(nv.pencil, x, e1, zero, f);
    CHECK(res.positive < 5e-6);
    CHECK(res.negative < 5e-6);
  }
  SUBCASE("with a transverse offset") {
    CausalResiduals res = causal_isometry_check(nv.pencil, x, e1, y, f);
    CHECK(res.positive < 5e-6);
    CHECK(res.negative < 5e-6);
  }
}

TEST_CASE("field evaluation") {
  Normalized nv = normalized_tensor(5, 2, 2);
  GridSpec g(512, 16.0);
  SampledSignal f = random_smooth(g, nv.pencil.dim_e, 12);

  SUBCASE("axis values reproduce the initial data") {
    RealVector origin = RealVector::Zero(2);
    CHECK((evaluate_field(nv.pencil, f, origin) -
           f.values[g.zero_node()])
              .norm() < 1e-10);
    RealVector on_axis(2);
    on_axis << g.node(300), 0.0;
    CHECK((evaluate_field(nv.pencil, f, on_axis) - f.values[300]).norm() <
          1e-10);
  }
  SUBCASE("line restriction matches the transport operator") {
    RealVector x(2), y(2);
    x << 1.0, 0.7;
    y << -0.3, 0.2;
    SampledSignal line = lambda_op(nv.pencil, x, y, f, g);
    for (int l : {100, 256, 380}) {
      RealVector point = g.node(l) * x + y;
      CHECK((evaluate_field(nv.pencil, f, point) - line.values[l]).norm() <
            1e-9);
    }
  }
}

TEST_CASE("the discrete field solves the compatibility system") {
  // centered differences of u_f against alpha_j du/dt_1 + i beta_j u decay
  // at second order
  for (std::uint64_t seed : {5u, 29u}) {
    Normalized nv = normalized_tensor(seed, 2, 2);
    GridSpec g(512, 16.0);
    SampledSignal f = random_smooth(g, nv.pencil.dim_e, seed + 1);
    RealVector probe(2);
    probe << 0.37, -0.21;
    auto residual_at = [&](double h) {
      RealVector e1 = RealVector::Zero(2), e2 = RealVector::Zero(2);
      e1(0) = 1.0;
      e2(1) = 1.0;
      Vector d2 = (evaluate_field(nv.pencil, f, RealVector(probe + h * e2)) -
                   evaluate_field(nv.pencil, f, RealVector(probe - h * e2))) /
                  (2.0 * h);
      Vector d1 = (evaluate_field(nv.pencil, f, RealVector(probe + h * e1)) -
                   evaluate_field(nv.pencil, f, RealVector(probe - h * e1))) /
                  (2.0 * h);
      Vector u0 = evaluate_field(nv.pencil, f, probe);
      return (d2 - nv.pencil.alpha[1] * d1 - kI * (nv.pencil.beta[1] * u0))
          .norm();
    };
    double r1 = residual_at(0.08);
    double r2 = residual_at(0.04);
    CHECK(std::log2(r1 / r2) > 1.9);
  }
}

TEST_CASE("slice pairing") {
  Normalized nv = normalized_tensor(6, 2, 2);
  const int m = nv.pencil.dim_e;

  SUBCASE("zero test field gives zero") {
    GridSpec g(256, 12.0);
    SampledSignal f = random_smooth(g, m, 14);
    TestField psi;
    psi.half_width = 4.0;
    psi.samples_per_axis = 16;
    psi.eval = [&](const RealVector&) { return Vector::Zero(m); };
    RealVector xi(2);
    xi << 1.0, 1.0;
    // 0/0 guarded by the psi-norm floor
    CHECK(slice_pairing_check(nv.pencil, f, xi, psi) == 0.0);
  }
  SUBCASE("one dimension collapses to the same integral") {
    Vessel v1 = make_strict_vessel(fixtures::jordan_tuple(3, 2));
    RealVector e1(1);
    e1 << 1.0;
    Normalized n1 = normalize(v1, e1);
    GridSpec g(256, 12.0);
    SampledSignal f = random_smooth(g, n1.pencil.dim_e, 15);
    Rng rng(16);
    Vector dir = rng.complex_gaussian(n1.pencil.dim_e, 1).col(0);
    TestField psi;
    psi.half_width = 5.0;
    psi.samples_per_axis = 64;
    psi.eval = [dir](const RealVector& t) {
      return Vector(std::exp(-t.squaredNorm()) * dir);
    };
    CHECK(slice_pairing_check(n1.pencil, f, e1, psi) < 1e-12);
  }
  SUBCASE("two dimensions agree to quadrature accuracy") {
    GridSpec g(256, 12.0);
    SampledSignal f = random_smooth(g, m, 17, 0.0, 0.9);
    Rng rng(18);
    Vector dir = rng.complex_gaussian(m, 1).col(0);
    dir /= dir.norm();
    TestField psi;
    psi.half_width = 4.5;
    psi.samples_per_axis = 48;
    psi.eval = [dir](const RealVector& t) {
      return Vector(std::exp(-1.3 * t.squaredNorm()) * dir);
    };
    RealVector xi(2);
    xi << 1.0, 1.0;
    CHECK(slice_pairing_check(nv.pencil, f, xi, psi) < 1e-4);
  }
}

TEST_CASE("fields agree when axis restrictions agree") {
  Normalized nv = normalized_tensor(7, 2, 2);
  GridSpec g(512, 16.0);
  SampledSignal f = random_smooth(g, nv.pencil.dim_e, 19);
  // rebuild the axis restriction of the field and compare fields at probes
  SampledSignal restricted(g, nv.pencil.dim_e);
  for (int k = 0; k < g.n; ++k) {
    RealVector point(2);
    point << g.node(k), 0.0;
    restricted.values[k] = evaluate_field(nv.pencil, f, point);
  }
  for (double a : {0.4, -0.9}) {
    RealVector probe(2);
    probe << a, 0.5 * a;
    CHECK((evaluate_field(nv.pencil, restricted, probe) -
           evaluate_field(nv.pencil, f, probe))
              .norm() < 1e-8);
  }
}
