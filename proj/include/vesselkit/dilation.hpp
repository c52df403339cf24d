#pragma once

// Discretized commutative unitary dilation of the contraction semigroup
// e^{i t . A}: the split space L^2(R_-, E) + H + L^2(R_+, E), the shift
// representation rho(t) built from trajectory extension and pencil transport,
// the dilation identity check and minimality diagnostics.

#include "vesselkit/system_sim.hpp"
#include "vesselkit/transport.hpp"

namespace vesselkit {

struct DilationVector {
  BoundaryTriple triple;

  double norm() const { return triple.norm(); }
  double norm_squared() const { return triple.norm_squared(); }
};

struct DilationConfig {
  Normalized normalized;          // sigma_1 = I frame; all rho math uses this
  NormalizedPencil input_pencil;  // = normalized.pencil
  NormalizedPencil out_pencil;    // beta from gamma*_{1j}
  GridSpec grid;
  RealVector xi0;                 // cone certificate in the original frame
  double cone_margin = 0.0;
  ConditionReport vr_report;
  Tolerances tol;

  const Vessel& vessel() const { return normalized.vessel; }
};

// Normalizes at xi0 and verifies the cone margin and the VR conditions;
// throws NotVR / NotInCone when the vessel does not support the construction.
DilationConfig make_dilation_config(const Vessel& v, const RealVector& xi0,
                                    const GridSpec& grid,
                                    const Tolerances& tol = {});

// iota: (0, h, 0); exactly isometric.
DilationVector embed(const DilationConfig& cfg, const Vector& h);

Vector project_h(const DilationVector& vec);  // P_H

// One application of rho(t). Reusable across vectors: the per-frequency
// transport phases and the exact Duhamel blocks for the state leg depend on
// t only.
class RhoApplier {
 public:
  RhoApplier(const DilationConfig& cfg, const RealVector& t);

  DilationVector apply(const DilationVector& vec) const;

  bool off_grid_shift() const { return off_grid_shift_; }
  double snap_error() const { return snap_error_; }
  bool cone_warning() const { return cone_warning_; }

 private:
  const DilationConfig& cfg_;
  RealVector t_;
  RealVector t_perp_;     // (0, t_2, ..., t_d)
  int roll_nodes_ = 0;    // t_1 / Delta when grid aligned
  bool off_grid_shift_ = false;
  double snap_error_ = 0.0;
  bool axis_only_ = false;     // t_perp = 0: pure roll path
  bool cone_warning_ = false;  // t outside Pos u -Pos
  std::vector<Matrix> in_phase_;   // e^{i (s_k alpha(t) + beta(t))}
  std::vector<Matrix> out_phase_;  // output pencil twin
  std::vector<Matrix> duhamel_;    // n x m exact Duhamel blocks per frequency
  Matrix leg2_flow_;               // e^{i eta . A}

  Vector state_at_t(const LineTrajectory& ext,
                    const SampledSignal& u_hat_shifted) const;
};

// rho restricted to the first axis (pure shift path).
DilationVector rho_one_dim(const DilationConfig& cfg, double t,
                           const DilationVector& vec);

// Full rho(t).
DilationVector rho(const DilationConfig& cfg, const RealVector& t,
                   const DilationVector& vec);

// ---------------------------------------------------------------------------
// experiment suites

struct DilationCheckReport {
  std::vector<double> level_errors;  // max over samples/basis per grid level
  std::vector<int> level_n;
  std::vector<double> per_t_errors;  // finest level, parallel to t_samples
  double slope = 0.0;  // log2(err_l / err_{l+1}) averaged over refinements
  double max_error_finest = 0.0;
};

// max over t samples and basis vectors of ||P_H rho(t) iota(h) - e^{i t A} h||
// / ||h|| at `levels` grids (N doubling from base_grid), with the refinement
// slope between consecutive levels.
DilationCheckReport dilation_check(const Vessel& v, const RealVector& xi0,
                                   const std::vector<RealVector>& t_samples,
                                   const GridSpec& base_grid, int levels,
                                   const Tolerances& tol = {});

double isometry_residual(const DilationConfig& cfg, const RealVector& t,
                         const DilationVector& vec);
double group_law_residual(const DilationConfig& cfg, const RealVector& t,
                          const RealVector& s, const DilationVector& vec);
double commutativity_residual(const DilationConfig& cfg, const RealVector& t,
                              const RealVector& s, const DilationVector& vec);
double inverse_residual(const DilationConfig& cfg, const RealVector& t,
                        const DilationVector& vec);

// Distance between the two triples, in the dilation norm.
double dilation_distance(const DilationVector& a, const DilationVector& b);

// State samples along tau -> xi tau + eta via transported input.
LineTrajectory state_on_lines(const DilationConfig& cfg,
                              const DilationVector& vec, const RealVector& xi,
                              const RealVector& eta);

// ---------------------------------------------------------------------------
// minimality

enum class MinimalityVerdict {
  Minimal,             // weakly strict: sufficient condition
  NonMinimalWitness,   // pencil-invariant subspace inside W found
  Undetermined,        // W nonzero but the invariance iteration emptied
};

struct MinimalityReport {
  MinimalityVerdict verdict = MinimalityVerdict::Minimal;
  WeaklyStrictReport weak_strict;
  Matrix witness;  // basis of the invariant subspace M (may be empty)
  double pencil_invariance_defect = 0.0;  // max over sampled s
  std::string summary;
};

MinimalityReport minimality_diagnostics(const DilationConfig& cfg);

// Dilation-space vector carried by a band-limited W-valued signal,
// u = F^{-1}(1_[band] w): its rho-orbit keeps the state at zero and never
// meets the embedded H.
DilationVector witness_vector(const DilationConfig& cfg, const Vector& w,
                              double band_low, double band_high);

}  // namespace vesselkit
