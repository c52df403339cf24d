// Acceptance suite: one criterion per runner, a pass/fail line each, exit
// nonzero when any criterion fails. Every tolerance is pinned here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "common.hpp"
#include "vesselkit/series.hpp"
#include "vesselkit/transport.hpp"

using namespace vesselkit;
using namespace vesselkit::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run_criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  bool in_budget = elapsed <= budget_seconds;
  bool pass = outcome.pass && in_budget;
  std::printf("%s criterion %2d: %s (%s) [%.2fs <= %.0fs]\n",
              pass ? "PASS" : "FAIL", number, name.c_str(),
              outcome.detail.c_str(), elapsed, budget_seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

// commuting Hermitian-pencil fixture: everything a polynomial in one
// Hermitian source, so the very reasonable conditions hold exactly
NormalizedPencil commuting_pencil(std::uint64_t seed, int d, int m) {
  Rng rng(seed);
  Matrix source = rng.hermitian_gaussian(m);
  NormalizedPencil p;
  p.d = d;
  p.dim_e = m;
  p.origin_direction = RealVector::Zero(d);
  p.origin_direction(0) = 1.0;
  p.alpha.assign(d, Matrix::Identity(m, m));
  p.beta.assign(d, Matrix::Zero(m, m));
  for (int j = 1; j < d; ++j) {
    double a0 = rng.normal(), a1 = rng.normal(), b0 = rng.normal();
    p.alpha[j] = a0 * Matrix::Identity(m, m) + a1 * source +
                 0.3 * (source * source);
    p.beta[j] = b0 * source;
  }
  return p;
}

AnalyticInitialData geometric_data(int m, int degree, double ratio,
                                   std::uint64_t seed) {
  Rng rng(seed);
  Vector dir = rng.complex_gaussian(m, 1).col(0);
  dir /= dir.norm();
  AnalyticInitialData init;
  for (int k = 0; k <= degree; ++k)
    init.b.push_back(Vector(std::pow(ratio, k) * dir));
  init.radius = 1.0 / ratio;
  init.bound = 1.0;
  return init;
}

Vessel linked_perturbation(const Vessel& v, double eps) {
  Vessel out = v;
  Matrix bump = eps * Matrix::Identity(v.dim_e, v.dim_e);
  out.gamma.set(0, 1, v.gamma.stored(0, 1) + bump);
  out.gamma_star.set(0, 1, v.gamma_star.stored(0, 1) + bump);
  return out;
}

// --------------------------------------------------------------------------

Outcome strict_embedding_soundness() {
  double worst = 0.0;
  int count = 0;
  bool ok = true;
  auto run_one = [&](const CommutingTuple& tuple) {
    ConditionReport report = check_vessel(make_strict_vessel(tuple), 1e-10);
    worst = std::max(worst, report.worst_residual());
    ok = ok && report.pass();
    ++count;
  };
  for (std::uint64_t seed = 1; seed <= 13; ++seed) {
    run_one(fixtures::tensor_tuple(seed, 2, 2));  // n = 4
    run_one(fixtures::tensor_tuple(seed, 3, 2));  // n = 8
    run_one(fixtures::polynomial_tuple(seed, 3, 3 + seed % 4));
  }
  for (std::uint64_t seed = 1; seed <= 11; ++seed)
    run_one(fixtures::jordan_tuple(seed, 2 + seed % 7));
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d fixtures, worst residual %.2e", count,
                worst);
  return {ok && count == 50, buf};
}

Outcome doubly_commuting_vr() {
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Vessel v = tensor_vessel(seed, 3, 2);
    RealVector ones = RealVector::Ones(3);
    ConditionReport vr = check_vr(v, Direction::vector(ones), 1e-10);
    Normalized nv = normalize(v, ones);
    ConditionReport vrs = check_vr_star(nv.vessel, 1e-10);
    ok = ok && vr.pass() && vrs.pass();
    worst = std::max({worst, vr.worst_residual(), vrs.worst_residual()});
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "20 tensor fixtures, worst residual %.2e",
                worst);
  return {ok, buf};
}

Outcome vr_equivalences() {
  RealVector ones = RealVector::Ones(3);
  RealVector eta(3);
  eta << 1.0, 2.0, 1.0;
  int agreements = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Vessel v = tensor_vessel(seed, 3, 2);
    Normalized nv = normalize(v, ones);
    bool base = check_vr(v, Direction::vector(ones), 1e-9).pass();
    bool star = check_vr_star(nv.vessel, 1e-9).pass();
    bool redirected = check_vr(v, Direction::vector(eta), 1e-9).pass();
    ok = ok && base && (base == star) && (base == redirected);
    agreements += (base == star) + (base == redirected);

    Vessel bad = linked_perturbation(nv.vessel, 1e-3);
    bool bad_base = check_vr(bad, 1e-7).pass();
    bool bad_star = check_vr_star(bad, 1e-7).pass();
    bool bad_redirected = check_vr(bad, Direction::vector(eta), 1e-7).pass();
    ok = ok && !bad_base && (bad_base == bad_star) &&
         (bad_base == bad_redirected);
    agreements += (bad_base == bad_star) + (bad_base == bad_redirected);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/80 pass-fail agreements", agreements);
  return {ok && agreements == 80, buf};
}

Outcome discrete_solver() {
  double worst = 0.0;
  bool ok = true;
  int count = 0;
  auto run_pencil = [&](const NormalizedPencil& pencil, std::uint64_t seed) {
    AnalyticInitialData init = geometric_data(pencil.dim_e, 6, 0.5, seed);
    PowerSeriesSolution sol = solve_discrete(pencil, init, 6);
    double res = check_discrete_compat(sol, pencil);
    worst = std::max(worst, res);
    ok = ok && res <= 1e-12;
    ++count;
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    run_pencil(normalized_tensor(seed, 2, 2).pencil, seed);  // m <= 4, d = 2
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    run_pencil(commuting_pencil(seed, 3, 2 + seed % 3), seed);
  for (std::uint64_t seed = 6; seed <= 10; ++seed)
    run_pencil(commuting_pencil(seed, 4, 2 + seed % 3), seed);

  // necessity: a first-condition violation of size eps admits no level-two
  // completion with residual below eps / 4
  const double eps = 1e-2;
  const int m = 2;
  NormalizedPencil p;
  p.d = 3;
  p.dim_e = m;
  p.origin_direction = RealVector::Zero(3);
  p.origin_direction(0) = 1.0;
  p.alpha.assign(3, Matrix::Identity(m, m));
  p.beta.assign(3, Matrix::Zero(m, m));
  p.alpha[1] << 1.0, 0.0, 0.0, -1.0;
  p.alpha[2] << 1.0, eps / 2.0, eps / 2.0, 1.0;
  Matrix commutator = p.alpha[1] * p.alpha[2] - p.alpha[2] * p.alpha[1];
  Eigen::JacobiSVD<Matrix> svd(commutator, Eigen::ComputeFullV);
  Vector a_e1 = svd.matrixV().col(0);

  MultiIndexSet support(3, 2);
  std::vector<int> unknown_of_rank(support.size(), -1);
  int unknowns = 0;
  for (int r = 0; r < support.size(); ++r) {
    const auto& n = support.at(r);
    if (!(n[1] == 0 && n[2] == 0)) unknown_of_rank[r] = unknowns++;
  }
  int rows = 0;
  for (int r = 0; r < support.size(); ++r)
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k)
        if (support.rank_shifted(support.at(r), j) >= 0 &&
            support.rank_shifted(support.at(r), k) >= 0)
          rows += m;
  Matrix a_mat = Matrix::Zero(rows, unknowns * m);
  Vector b_vec = Vector::Zero(rows);
  int row = 0;
  auto add_block = [&](int rank, const Matrix& coeff) {
    if (unknown_of_rank[rank] >= 0)
      a_mat.block(row, unknown_of_rank[rank] * m, m, m) += coeff;
    else if (support.at(rank) == std::vector<int>{1, 0, 0})
      b_vec.segment(row, m) -= coeff * a_e1;
  };
  for (int r = 0; r < support.size(); ++r) {
    const auto& n = support.at(r);
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k) {
        int rj = support.rank_shifted(n, j);
        int rk = support.rank_shifted(n, k);
        if (rj < 0 || rk < 0) continue;
        add_block(rj, p.alpha[k]);
        add_block(rk, Matrix(-p.alpha[j]));
        Matrix gamma_jk = (j == 0) ? p.beta[k]
                                   : Matrix(p.alpha[j] * p.beta[k] -
                                            p.alpha[k] * p.beta[j]);
        add_block(r, Matrix(kI * gamma_jk));
        row += m;
      }
  }
  double infeasibility = solve_least_squares(a_mat, Vector(-b_vec)).residual;
  ok = ok && infeasibility >= eps / 4.0;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d fixtures, worst residual %.2e; infeasibility %.3e >= %.2e",
                count, worst, infeasibility, eps / 4.0);
  return {ok, buf};
}

Outcome growth_bound() {
  bool ok = true;
  double worst_ratio = 0.0;
  for (std::uint64_t seed : {13u, 14u, 15u}) {
    Normalized nv = normalized_tensor(seed, 3, 2);
    AnalyticInitialData init = geometric_data(nv.pencil.dim_e, 8, 0.5, seed);
    PowerSeriesSolution sol = solve_discrete(nv.pencil, init, 8);
    double c = 0.0;
    for (int j = 1; j < nv.pencil.d; ++j) {
      c = std::max(c, op_norm(nv.pencil.alpha[j]));
      c = std::max(c, op_norm(nv.pencil.beta[j]));
    }
    const double r = 1.5;  // 0.75 of the radius R = 2 of b(k) = xi / 2^k
    for (int rank = 0; rank < sol.support.size(); ++rank) {
      double bound = analytic_growth_bound(sol.support.at(rank), c, 1.0, r);
      double ratio = sol.coefficients[rank].norm() / bound;
      worst_ratio = std::max(worst_ratio, ratio);
      ok = ok && ratio <= 1.0 + 1e-9;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "3 pencils, |n| <= 8, worst ratio %.3f",
                worst_ratio);
  return {ok, buf};
}

Outcome transport_isometry() {
  Normalized nv = normalized_tensor(4, 2, 2);
  GridSpec g(1024, 20.0);
  bool ok = true;
  double worst_iso = 0.0, worst_causal = 0.0, worst_oracle = 0.0;
  RealVector e1(2), zero(2);
  e1 << 1.0, 0.0;
  zero.setZero();
  for (std::uint64_t seed : {10u, 20u, 30u}) {
    Rng rng(seed);
    Vector dir = rng.complex_gaussian(nv.pencil.dim_e, 1).col(0);
    dir /= dir.norm();
    SampledSignal f = gaussian_signal(g, -5.0, 1.0, dir);
    RealVector x(2), y(2);
    x << 1.0, 0.20 + 0.05 * (seed % 3);
    y << 0.15, -0.35;
    if (lambda_min(nv.pencil.alpha_of(x)) < 0.1)
      return {false, "fixture direction below the lambda_min floor"};

    SampledSignal out = lambda_op(nv.pencil, x, zero, f, g);
    double iso =
        std::abs(weighted_norms(out, nv.pencil.alpha_of(x), 0.0).full /
                     f.norm_squared() -
                 1.0);
    CausalResiduals causal0 = causal_isometry_check(nv.pencil, x, e1, zero, f);
    CausalResiduals causal1 = causal_isometry_check(nv.pencil, x, e1, y, f);
    worst_iso = std::max(worst_iso, iso);
    worst_causal = std::max({worst_causal, causal0.positive, causal0.negative,
                             causal1.positive, causal1.negative});
    ok = ok && worst_iso < 5e-6 && worst_causal < 5e-6;

    // fast path against the direct Riemann oracle
    SampledSignal fast = lambda_op(nv.pencil, e1, y, f, g);
    SampledSignal fhat = forward_fft(f);
    Matrix ay = nv.pencil.alpha_of(y), by = nv.pencil.beta_of(y);
    for (int l = 128; l < g.n; l += 256) {
      Vector acc = Vector::Zero(nv.pencil.dim_e);
      for (int k = 0; k < g.n; ++k) {
        double s = fhat.grid.node(k);
        acc += std::polar(1.0, s * g.node(l)) *
               (herm_phase(s * ay + by, 1.0) * fhat.values[k]);
      }
      acc *= fhat.grid.step() / std::sqrt(2.0 * M_PI);
      worst_oracle = std::max(worst_oracle, (acc - fast.values[l]).norm());
    }
    ok = ok && worst_oracle < 1e-6;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "iso %.1e, causal %.1e (<= 5e-6); oracle gap %.1e (<= 1e-6)",
                worst_iso, worst_causal, worst_oracle);
  return {ok, buf};
}

Outcome field_solves_system() {
  bool ok = true;
  double worst_slope = 1e9;
  for (std::uint64_t seed : {5u, 29u}) {
    Normalized nv = normalized_tensor(seed, 2, 2);
    GridSpec g(512, 16.0);
    Rng rng(seed + 1);
    Vector dir = rng.complex_gaussian(nv.pencil.dim_e, 1).col(0);
    dir /= dir.norm();
    SampledSignal f = gaussian_signal(g, 0.0, 1.5, dir);
    RealVector probe(2);
    probe << 0.37, -0.21;
    auto residual_at = [&](double h) {
      RealVector e1v = RealVector::Zero(2), e2 = RealVector::Zero(2);
      e1v(0) = 1.0;
      e2(1) = 1.0;
      Vector d2 = (evaluate_field(nv.pencil, f, RealVector(probe + h * e2)) -
                   evaluate_field(nv.pencil, f, RealVector(probe - h * e2))) /
                  (2.0 * h);
      Vector d1 = (evaluate_field(nv.pencil, f, RealVector(probe + h * e1v)) -
                   evaluate_field(nv.pencil, f, RealVector(probe - h * e1v))) /
                  (2.0 * h);
      Vector u0 = evaluate_field(nv.pencil, f, probe);
      return (d2 - nv.pencil.alpha[1] * d1 - kI * (nv.pencil.beta[1] * u0))
          .norm();
    };
    double r1 = residual_at(0.08), r2 = residual_at(0.04),
           r3 = residual_at(0.02);
    worst_slope =
        std::min({worst_slope, std::log2(r1 / r2), std::log2(r2 / r3)});
    ok = ok && std::log2(r1 / r2) >= 1.9 && std::log2(r2 / r3) >= 1.9;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "2 fixtures, worst Richardson slope %.3f",
                worst_slope);
  return {ok, buf};
}

Outcome energy_balance() {
  CommutingTuple tup = fixtures::jordan_tuple(7, 3);
  tup.A[0] *= 0.1;
  Vessel v = make_strict_vessel(tup);
  Rng rng(4);
  Vector dir = rng.complex_gaussian(v.dim_e, 1).col(0);
  dir /= dir.norm();
  Vector h = rng.complex_gaussian(3, 1).col(0);
  RealVector xi(1), eta(1);
  xi << 1.0;
  eta << 0.0;
  auto residual_at = [&](int n) {
    GridSpec g(n, 4.0);
    SampledSignal u = gaussian_signal(g, 0.0, 2.5, dir);
    return energy_balance_residual(propagate_state(v, h, u, xi, eta), v);
  };
  double r512 = residual_at(512), r1024 = residual_at(1024),
         r2048 = residual_at(2048);
  double slope = 0.5 * (std::log2(r512 / r1024) + std::log2(r1024 / r2048));
  bool ok = r1024 <= 1e-6 && slope >= 1.8;
  char buf[96];
  std::snprintf(buf, sizeof buf, "residual %.2e at N=1024, slope %.2f", r1024,
                slope);
  return {ok, buf};
}

Outcome one_dim_dilation() {
  double worst = 0.0;
  {
    Vessel v = scalar_vessel();
    RealVector xi0(1);
    xi0 << 1.0;
    DilationConfig cfg = make_dilation_config(v, xi0, GridSpec(2048, 40.0));
    Vector h(1);
    h << 1.0;
    for (double t : {0.5, 1.0, 2.0}) {
      DilationVector out = rho_one_dim(cfg, t, embed(cfg, h));
      worst =
          std::max(worst, std::abs(project_h(out)(0) - std::exp(-0.5 * t)));
    }
  }
  {
    Vessel v = make_strict_vessel(fixtures::jordan_tuple(11, 3));
    RealVector xi0(1);
    xi0 << 1.0;
    DilationConfig cfg = make_dilation_config(v, xi0, GridSpec(2048, 40.0));
    for (double t : {0.5, 1.0, 2.0}) {
      Matrix semigroup = expm(kI * t * cfg.vessel().A[0]);
      for (int i = 0; i < 3; ++i) {
        Vector h = Vector::Zero(3);
        h(i) = 1.0;
        DilationVector out = rho_one_dim(cfg, t, embed(cfg, h));
        worst = std::max(worst, (project_h(out) - semigroup * h).norm());
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max dilation error %.2e (<= 1e-6)", worst);
  return {worst <= 1e-6, buf};
}

struct SuiteNumbers {
  double finest_error = 0.0;
  double slope = 0.0;
  double isometry = 0.0;
  double group = 0.0;
  double commutativity = 0.0;
};

SuiteNumbers dilation_suite(const Vessel& v, int d) {
  RealVector ones = RealVector::Ones(d);
  std::vector<RealVector> times;
  for (double a : {0.3125, 0.625, 0.9375})
    for (double b : {0.3125, 0.625, 0.9375}) {
      RealVector t = RealVector::Zero(d);
      t(0) = a;
      t(1) = b;
      if (d > 2) t(2) = 0.5 * (a + b);
      times.push_back(t);
    }
  SuiteNumbers numbers;
  DilationCheckReport report =
      dilation_check(v, ones, times, GridSpec(512, 40.0), 3);
  numbers.finest_error = report.max_error_finest;
  numbers.slope = report.slope;

  GridSpec g(1024, 40.0);
  DilationConfig cfg = make_dilation_config(v, ones, g);
  DilationVector smooth = smooth_vector(cfg, 7);
  RealVector ta = times[1], tb = times[3];
  numbers.isometry = std::max(isometry_residual(cfg, ta, smooth),
                              isometry_residual(cfg, RealVector(-ta), smooth));
  numbers.group = group_law_residual(cfg, ta, tb, smooth);
  RealVector te1 = RealVector::Zero(d), te2 = RealVector::Zero(d);
  te1(0) = 0.625;
  te2(1) = 0.625;
  numbers.commutativity = commutativity_residual(cfg, te1, te2, smooth);
  return numbers;
}

Outcome weak_ando_dilation() {
  SuiteNumbers n = dilation_suite(tensor_vessel(42, 2, 2), 2);
  bool ok = n.finest_error <= 5e-3 && n.slope >= 1.8 && n.isometry <= 1e-4 &&
            n.group <= 1e-4 && n.commutativity <= 1e-4;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "error %.2e slope %.2f iso %.1e group %.1e comm %.1e",
                n.finest_error, n.slope, n.isometry, n.group,
                n.commutativity);
  return {ok, buf};
}

Outcome three_dim_dilation() {
  SuiteNumbers n = dilation_suite(tensor_vessel(9, 3, 2), 3);
  bool ok = n.finest_error <= 5e-3 && n.slope >= 1.8 && n.isometry <= 1e-4 &&
            n.group <= 1e-4 && n.commutativity <= 1e-4;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "error %.2e slope %.2f iso %.1e group %.1e comm %.1e",
                n.finest_error, n.slope, n.isometry, n.group,
                n.commutativity);
  return {ok, buf};
}

Outcome minimality() {
  bool ok = true;
  Vessel strict = tensor_vessel(31, 2, 2);
  DilationConfig strict_cfg =
      make_dilation_config(strict, RealVector::Ones(2), GridSpec(256, 10.0));
  MinimalityReport minimal = minimality_diagnostics(strict_cfg);
  ok = ok && minimal.verdict == MinimalityVerdict::Minimal;

  Vessel decoupled = fixtures::decoupled_w_vessel(7, 2, 2);
  GridSpec g(512, 20.0);
  DilationConfig cfg = make_dilation_config(decoupled, RealVector::Ones(2), g);
  MinimalityReport witnessed = minimality_diagnostics(cfg);
  ok = ok && witnessed.verdict == MinimalityVerdict::NonMinimalWitness &&
       witnessed.witness.cols() == 1;

  double state_norm = 0.0, overlap = 0.0;
  if (ok) {
    DilationVector vec =
        witness_vector(cfg, witnessed.witness.col(0), 0.5, 2.5);
    RealVector t(2);
    t << 0.625, 0.3125;
    DilationVector moved = rho(cfg, t, vec);
    state_norm = project_h(moved).norm() / vec.norm();
    Rng rng(10);
    Vector h = rng.complex_gaussian(cfg.vessel().dim_h, 1).col(0);
    h /= h.norm();
    overlap = std::abs(project_h(moved).dot(h));
    ok = ok && state_norm <= 1e-8 && overlap <= 1e-8;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "strict: minimal; witness orbit state %.1e overlap %.1e",
                state_norm, overlap);
  return {ok, buf};
}

Outcome cayley_layer() {
  Rng rng(51);
  double worst_norm = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = fixtures::dissipative_matrix(rng, 2 + trial % 4, 0.05);
    CayleyResult result = cayley_cogenerator(a);
    worst_norm = std::max(worst_norm, result.norm);
    ok = ok && result.norm <= 1.0 + 1e-10;
  }
  // first-order recovery: gap(s) ~ C s
  Matrix a = fixtures::dissipative_matrix(rng, 3, 0.2);
  double g4 = cayley_recovery_gap(a, 0.04);
  double g2 = cayley_recovery_gap(a, 0.02);
  double g1 = cayley_recovery_gap(a, 0.01);
  double rate1 = g4 / g2, rate2 = g2 / g1;
  ok = ok && rate1 > 1.6 && rate1 < 2.4 && rate2 > 1.6 && rate2 < 2.4;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "max ||T|| %.12f; recovery ratios %.2f, %.2f (~2)", worst_norm,
                rate1, rate2);
  return {ok, buf};
}

}  // namespace

int main() {
  std::printf("vesselkit acceptance suite\n");
  run_criterion(1, "strict embedding soundness", 5, strict_embedding_soundness);
  run_criterion(2, "doubly commuting VR", 2, doubly_commuting_vr);
  run_criterion(3, "VR equivalences and direction invariance", 2,
                vr_equivalences);
  run_criterion(4, "discrete solver and necessity", 2, discrete_solver);
  run_criterion(5, "analytic growth bound", 1, growth_bound);
  run_criterion(6, "transport isometry and causality", 10, transport_isometry);
  run_criterion(7, "field solves the compatibility system", 5,
                field_solves_system);
  run_criterion(8, "energy balance", 5, energy_balance);
  run_criterion(9, "one-dimensional dilation", 10, one_dim_dilation);
  run_criterion(10, "two-dimensional commutative dilation", 60,
                weak_ando_dilation);
  run_criterion(11, "three-dimensional VR dilation", 120, three_dim_dilation);
  run_criterion(12, "minimality diagnostics", 5, minimality);
  run_criterion(13, "Cayley cogenerator layer", 1, cayley_layer);
  if (failures == 0) {
    std::printf("all 13 criteria pass\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", failures);
  return 1;
}
