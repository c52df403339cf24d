#include "vesselkit/dilation.hpp"

#include <cmath>
#include <sstream>

namespace vesselkit {

// ---------------------------------------------------------------------------
// config

DilationConfig make_dilation_config(const Vessel& v, const RealVector& xi0,
                                    const GridSpec& grid,
                                    const Tolerances& tol) {
  DilationConfig cfg;
  cfg.tol = tol;
  cfg.grid = grid;
  cfg.xi0 = xi0;
  cfg.cone_margin = pos_cone_margin(v, xi0);
  if (cfg.cone_margin <= 0.0)
    throw Error(ErrorCode::NotInCone, "dilation: sigma(xi0) not positive");
  cfg.normalized = normalize(v, xi0, tol);
  cfg.input_pencil = cfg.normalized.pencil;
  cfg.out_pencil = output_pencil(cfg.normalized);
  cfg.vr_report = check_vr(cfg.normalized.vessel, tol.identity * 1e2);
  if (!cfg.vr_report.pass())
    throw Error(ErrorCode::NotVR, "dilation: VR conditions fail at " +
                                      std::to_string(cfg.vr_report.worst_residual()));
  return cfg;
}

DilationVector embed(const DilationConfig& cfg, const Vector& h) {
  DilationVector vec;
  vec.triple = BoundaryTriple::zero(cfg.grid, cfg.vessel().dim_e,
                                    cfg.vessel().dim_h);
  vec.triple.h = h;
  return vec;
}

Vector project_h(const DilationVector& vec) { return vec.triple.h; }

double dilation_distance(const DilationVector& a, const DilationVector& b) {
  BoundaryTriple diff = a.triple;
  diff -= b.triple;
  return diff.norm();
}

// ---------------------------------------------------------------------------
// rho

RhoApplier::RhoApplier(const DilationConfig& cfg, const RealVector& t)
    : cfg_(cfg), t_(t) {
  const double delta = cfg.grid.step();
  t_perp_ = t;
  t_perp_(0) = 0.0;

  roll_nodes_ = static_cast<int>(std::lround(t(0) / delta));
  snap_error_ = std::abs(t(0) - roll_nodes_ * delta);
  off_grid_shift_ = snap_error_ > 1e-9 * std::max(1.0, std::abs(t(0)));
  axis_only_ = t_perp_.cwiseAbs().maxCoeff() == 0.0 && !off_grid_shift_;

  // isometry holds on Pos u -Pos; warn outside
  if (cfg.vessel().dim_e > 0) {
    Matrix at = cfg.input_pencil.alpha_of(t);
    HermEig eig = herm_eig(at);
    double lo = eig.values(0), hi = eig.values(eig.values.size() - 1);
    cone_warning_ = !(lo > 0.0 || hi < 0.0);
  }
  if (axis_only_) return;

  // frequency-side phases carrying transport by t_perp and shift by t_1
  GridSpec freq(cfg.grid.n, cfg.grid.nyquist());
  Matrix a_in = cfg.input_pencil.alpha_of(t);
  Matrix b_in = cfg.input_pencil.beta_of(t);
  Matrix a_out = cfg.out_pencil.alpha_of(t);
  Matrix b_out = cfg.out_pencil.beta_of(t);
  in_phase_.resize(freq.n);
  out_phase_.resize(freq.n);
  for (int k = 0; k < freq.n; ++k) {
    double s = freq.node(k);
    in_phase_[k] = herm_phase(s * a_in + b_in, 1.0);
    out_phase_[k] = herm_phase(s * a_out + b_out, 1.0);
  }

  // exact Duhamel blocks for the perpendicular state leg:
  // coupling_integral(X, Q, Y) = int_0^1 e^{(1-w)X} Q e^{wY} dw with
  // X = i eta.A, Q = Phi^* sigma(eta), Y = i (s alpha(eta) + beta(eta)).
  if (t_perp_.cwiseAbs().maxCoeff() != 0.0) {
    const Vessel& v = cfg.vessel();
    Matrix flow_gen = v.a_of(t_perp_);
    leg2_flow_ = expm(kI * flow_gen);
    Matrix q = v.Phi.adjoint() * v.sigma_of(t_perp_);
    Matrix a_eta = cfg.input_pencil.alpha_of(t_perp_);
    Matrix b_eta = cfg.input_pencil.beta_of(t_perp_);
    duhamel_.resize(freq.n);
    for (int k = 0; k < freq.n; ++k) {
      double s = freq.node(k);
      // raised-cosine rolloff over the top quarter of the band keeps the
      // state quadrature free of hard-cut ringing from slowly decaying
      // spectra; decayed spectra never see it
      double edge = std::abs(s) / freq.half_width;
      double taper = edge <= 0.75
                         ? 1.0
                         : 0.5 * (1.0 + std::cos(M_PI * (edge - 0.75) / 0.25));
      duhamel_[k] = taper * coupling_integral(kI * flow_gen, q,
                                              kI * (s * a_eta + b_eta));
    }
  }
}

Vector RhoApplier::state_at_t(const LineTrajectory& ext,
                              const SampledSignal& u_hat) const {
  const int n0 = cfg_.grid.zero_node();
  const double delta = cfg_.grid.step();
  Vector x1;
  if (!off_grid_shift_) {
    int node = n0 + roll_nodes_;
    if (node < 0 || node >= cfg_.grid.n)
      throw Error(ErrorCode::OutsideDomain, "rho: t_1 beyond the grid");
    x1 = ext.state[node];
  } else {
    // partial trapezoidal step from the node below t_1
    int below = static_cast<int>(std::floor(t_(0) / delta));
    int node = n0 + below;
    if (node < 0 || node + 1 >= cfg_.grid.n)
      throw Error(ErrorCode::OutsideDomain, "rho: t_1 beyond the grid");
    double frac = t_(0) - below * delta;
    const Vessel& v = cfg_.vessel();
    Matrix flow = expm(kI * frac * v.A[0]);
    Matrix q = v.Phi.adjoint() * v.sigma[0];
    Vector u_lo = ext.u.values[node];
    Vector u_hi = ext.u.values[node] +
                  (frac / delta) * (ext.u.values[node + 1] - ext.u.values[node]);
    x1 = flow * (ext.state[node] - kI * 0.5 * frac * (q * u_lo)) -
         kI * 0.5 * frac * (q * u_hi);
  }
  if (t_perp_.cwiseAbs().maxCoeff() == 0.0) return x1;

  // x(t) = e^{i eta.A} x1 - i (ds/sqrt(2pi)) sum_k D_k e^{i s_k t_1} uhat_k
  Vector acc = Vector::Zero(cfg_.vessel().dim_h);
  const double t1 = t_(0);
  for (int k = 0; k < u_hat.grid.n; ++k) {
    Complex shift = std::polar(1.0, u_hat.grid.node(k) * t1);
    acc.noalias() += duhamel_[k] * (shift * u_hat.values[k]);
  }
  double scale = u_hat.grid.step() / std::sqrt(2.0 * M_PI);
  return leg2_flow_ * x1 - kI * scale * acc;
}

DilationVector RhoApplier::apply(const DilationVector& vec) const {
  const Vessel& v = cfg_.vessel();
  const int n0 = cfg_.grid.zero_node();
  LineTrajectory ext = extend_trajectory(v, vec.triple);

  SampledSignal u_dag(cfg_.grid, v.dim_e), y_dag(cfg_.grid, v.dim_e);
  Vector x_t;
  if (axis_only_) {
    u_dag = roll(ext.u, roll_nodes_);
    y_dag = roll(ext.y, roll_nodes_);
    int node = n0 + roll_nodes_;
    if (node < 0 || node >= cfg_.grid.n)
      throw Error(ErrorCode::OutsideDomain, "rho: t_1 beyond the grid");
    x_t = ext.state[node];
  } else {
    SampledSignal u_hat = forward_fft(ext.u);
    SampledSignal y_hat = forward_fft(ext.y);
    SampledSignal u_rot = u_hat, y_rot = y_hat;
    for (int k = 0; k < u_hat.grid.n; ++k) {
      u_rot.values[k] = in_phase_[k] * u_hat.values[k];
      y_rot.values[k] = out_phase_[k] * y_hat.values[k];
    }
    u_dag = inverse_fft(u_rot);
    y_dag = inverse_fft(y_rot);
    x_t = state_at_t(ext, u_hat);
  }

  DilationVector out;
  out.triple = BoundaryTriple::zero(cfg_.grid, v.dim_e, v.dim_h);
  for (int k = 0; k <= n0; ++k) out.triple.y_past[k] = y_dag.values[k];
  for (int k = n0; k < cfg_.grid.n; ++k)
    out.triple.u_future[k - n0] = u_dag.values[k];
  out.triple.h = x_t;
  return out;
}

DilationVector rho(const DilationConfig& cfg, const RealVector& t,
                   const DilationVector& vec) {
  return RhoApplier(cfg, t).apply(vec);
}

DilationVector rho_one_dim(const DilationConfig& cfg, double t,
                           const DilationVector& vec) {
  RealVector tv = RealVector::Zero(cfg.vessel().d);
  tv(0) = t;
  return rho(cfg, tv, vec);
}

// ---------------------------------------------------------------------------
// suites

DilationCheckReport dilation_check(const Vessel& v, const RealVector& xi0,
                                   const std::vector<RealVector>& t_samples,
                                   const GridSpec& base_grid, int levels,
                                   const Tolerances& tol) {
  DilationCheckReport report;
  for (int level = 0; level < levels; ++level) {
    GridSpec grid(base_grid.n << level, base_grid.half_width);
    DilationConfig cfg = make_dilation_config(v, xi0, grid, tol);
    const Vessel& nv = cfg.vessel();
    double worst = 0.0;
    std::vector<double> per_t;
    per_t.reserve(t_samples.size());
    for (const auto& t : t_samples) {
      RhoApplier op(cfg, t);
      Matrix semigroup = expm(kI * nv.a_of(t));
      double for_this_t = 0.0;
      for (int i = 0; i < nv.dim_h; ++i) {
        Vector h = Vector::Zero(nv.dim_h);
        h(i) = 1.0;
        DilationVector out = op.apply(embed(cfg, h));
        for_this_t =
            std::max(for_this_t, (project_h(out) - semigroup * h).norm());
      }
      per_t.push_back(for_this_t);
      worst = std::max(worst, for_this_t);
    }
    report.level_errors.push_back(worst);
    report.level_n.push_back(grid.n);
    report.per_t_errors = std::move(per_t);
  }
  report.max_error_finest = report.level_errors.back();
  if (levels > 1) {
    double acc = 0.0;
    for (int l = 0; l + 1 < levels; ++l)
      acc += std::log2(report.level_errors[l] /
                       std::max(report.level_errors[l + 1], 1e-300));
    report.slope = acc / (levels - 1);
  }
  return report;
}

double isometry_residual(const DilationConfig& cfg, const RealVector& t,
                         const DilationVector& vec) {
  DilationVector out = rho(cfg, t, vec);
  return std::abs(out.norm() / vec.norm() - 1.0);
}

double group_law_residual(const DilationConfig& cfg, const RealVector& t,
                          const RealVector& s, const DilationVector& vec) {
  DilationVector lhs = rho(cfg, t, rho(cfg, s, vec));
  DilationVector rhs = rho(cfg, RealVector(t + s), vec);
  return dilation_distance(lhs, rhs) / vec.norm();
}

double commutativity_residual(const DilationConfig& cfg, const RealVector& t,
                              const RealVector& s, const DilationVector& vec) {
  DilationVector lhs = rho(cfg, t, rho(cfg, s, vec));
  DilationVector rhs = rho(cfg, s, rho(cfg, t, vec));
  return dilation_distance(lhs, rhs) / vec.norm();
}

double inverse_residual(const DilationConfig& cfg, const RealVector& t,
                        const DilationVector& vec) {
  DilationVector back = rho(cfg, RealVector(-t), rho(cfg, t, vec));
  return dilation_distance(back, vec) / vec.norm();
}

LineTrajectory state_on_lines(const DilationConfig& cfg,
                              const DilationVector& vec, const RealVector& xi,
                              const RealVector& eta) {
  const Vessel& v = cfg.vessel();
  LineTrajectory ext = extend_trajectory(v, vec.triple);
  SampledSignal u_line =
      lambda_op(cfg.input_pencil, xi, eta, ext.u, cfg.grid);
  Vector x_eta;
  if (eta.cwiseAbs().maxCoeff() == 0.0) {
    x_eta = vec.triple.h;
  } else {
    RhoApplier at_eta(cfg, eta);
    x_eta = project_h(at_eta.apply(vec));
  }
  // propagate_state pins x(0) = e^{i eta.A} h0, so pull the value back
  Vector h0 = expm(-kI * v.a_of(eta)) * x_eta;
  return propagate_state(v, h0, u_line, xi, eta);
}

// ---------------------------------------------------------------------------
// minimality

MinimalityReport minimality_diagnostics(const DilationConfig& cfg) {
  MinimalityReport report;
  const Vessel& v = cfg.vessel();
  report.weak_strict = weakly_strict_report(v, cfg.tol.rank);
  if (report.weak_strict.weakly_strict) {
    report.verdict = MinimalityVerdict::Minimal;
    report.summary = "weakly strict: minimal (sufficient condition)";
    return report;
  }

  // largest {alpha_j, beta_j}-invariant subspace inside W by the stabilizing
  // iteration V_{k+1} = { v in V_k : alpha_j v, beta_j v in V_k }
  const NormalizedPencil& pencil = cfg.input_pencil;
  Matrix basis = report.weak_strict.kernel_basis;
  const int m = v.dim_e;
  int guard = static_cast<int>(basis.cols()) + 1;
  while (basis.cols() > 0 && guard-- > 0) {
    Matrix projector_out =
        Matrix::Identity(m, m) - basis * basis.adjoint();
    Matrix stacked(2 * static_cast<Eigen::Index>(pencil.d) * m, basis.cols());
    for (int j = 0; j < pencil.d; ++j) {
      stacked.middleRows(2 * j * m, m) = projector_out * (pencil.alpha[j] * basis);
      stacked.middleRows((2 * j + 1) * m, m) =
          projector_out * (pencil.beta[j] * basis);
    }
    Matrix coeff = null_space(stacked, 1e-8);
    if (coeff.cols() == basis.cols()) break;  // stabilized
    basis = basis * coeff;                    // columns stay orthonormal
  }
  report.witness = basis;

  if (basis.cols() == 0) {
    report.verdict = MinimalityVerdict::Undetermined;
    report.summary = "no witness; minimality undetermined";
    return report;
  }

  report.verdict = MinimalityVerdict::NonMinimalWitness;
  const double probes[5] = {0.0, 1.0, -1.0, 2.5, 0.6180339887498949};
  Matrix projector_out = Matrix::Identity(m, m) - basis * basis.adjoint();
  double defect = 0.0;
  for (double s : probes)
    for (int j = 0; j < pencil.d; ++j) {
      Matrix image = (s * pencil.alpha[j] + pencil.beta[j]) * basis;
      defect = std::max(defect, (projector_out * image).norm());
    }
  report.pencil_invariance_defect = defect;
  std::ostringstream os;
  os << "non-minimal, witness subspace of dim " << basis.cols()
     << " (pencil invariance defect " << defect << ")";
  report.summary = os.str();
  return report;
}

DilationVector witness_vector(const DilationConfig& cfg, const Vector& w,
                              double band_low, double band_high) {
  GridSpec freq(cfg.grid.n, cfg.grid.nyquist());
  SampledSignal ghat(freq, cfg.vessel().dim_e);
  for (int k = 0; k < freq.n; ++k) {
    double s = freq.node(k);
    if (s >= band_low && s <= band_high) ghat.values[k] = w;
  }
  SampledSignal u = inverse_fft(ghat);
  DilationVector vec;
  vec.triple = BoundaryTriple::zero(cfg.grid, cfg.vessel().dim_e,
                                    cfg.vessel().dim_h);
  const int n0 = cfg.grid.zero_node();
  for (int k = 0; k <= n0; ++k) vec.triple.y_past[k] = u.values[k];
  for (int k = n0; k < cfg.grid.n; ++k)
    vec.triple.u_future[k - n0] = u.values[k];
  return vec;
}

}  // namespace vesselkit
