#pragma once

// Frequency-domain machinery: the unitary representation of R^d twisted by
// the Hermitian pencil s alpha(x) + beta(x), the line transport operator,
// sigma-weighted half-line norms, full-field evaluation and the slice
// pairing identity, all on sampled grids.
//
// Pencil exponentials go through per-frequency Hermitian eigendecompositions
// (SpectrumCache); phases are unitary up to eigensolver error. Frequency sums
// run in a fixed order per output node, so results are reproducible even when
// output nodes are processed in parallel.

#include <functional>

#include "vesselkit/grid.hpp"
#include "vesselkit/vessel.hpp"

namespace vesselkit {

// Worker cap for data-parallel output-node loops; reads VESSELKIT_THREADS,
// defaults to 1 (fully sequential).
int worker_count();

// Per-frequency eigendecompositions of M_x(s_k) = s_k alpha(x) + beta(x) on a
// frequency grid.
struct SpectrumCache {
  GridSpec freq_grid;
  RealVector direction;
  std::vector<HermEig> nodes;

  SpectrumCache(const NormalizedPencil& pencil, const GridSpec& freq_grid,
                const RealVector& x);

  // max_k ||U_k L_k U_k^* - M_x(s_k)|| / ||M_x(s_k)||
  double reconstruction_defect(const NormalizedPencil& pencil) const;
};

// pi(t) f = F^{-1}( e^{i (s alpha(t) + beta(t))} F(f) ); unitary, group law
// up to pencil commutator residuals. Wraparound is periodic by construction.
SampledSignal apply_pi(const NormalizedPencil& pencil, const RealVector& t,
                       const SampledSignal& f, bool* aliasing_risk = nullptr);

struct LambdaFlags {
  bool isometric_direction = true;  // lambda_min(alpha(x)) > 0
  bool aliasing_risk = false;
  bool fast_path = false;  // alpha(x) = I, beta(x) = 0 inverse-FFT route
};

// (Lambda(x, y) f)(tau) =
//   (1/sqrt(2 pi)) int e^{i tau (s alpha(x) + beta(x))}
//                      e^{i (s alpha(y) + beta(y))} fhat(s) ds,
// evaluated at the nodes of out_grid by the frequency Riemann sum. When
// alpha(x) = I and beta(x) = 0 and out_grid matches, this is one inverse FFT.
SampledSignal lambda_op(const NormalizedPencil& pencil, const RealVector& x,
                        const RealVector& y, const SampledSignal& f,
                        const GridSpec& out_grid,
                        LambdaFlags* flags = nullptr);

struct SplitNorms {
  double full = 0.0;
  double left = 0.0;
  double right = 0.0;
};

// Riemann sums of <weight f, f> over all nodes / t < split / t > split; the
// node nearest the split contributes half to each side, so full = left +
// right exactly.
SplitNorms weighted_norms(const SampledSignal& f, const Matrix& weight,
                          double split_at);

struct CausalResiduals {
  double positive = 0.0;  // half line t > 0
  double negative = 0.0;  // half line t < 0
  LambdaFlags flags_x, flags_xprime;
};

// Compares the alpha(x)-weighted half-line energies of Lambda(x, y) f with
// the alpha(x')-weighted ones of Lambda(x', y) f, normalized by ||f||^2.
CausalResiduals causal_isometry_check(const NormalizedPencil& pencil,
                                      const RealVector& x,
                                      const RealVector& x_prime,
                                      const RealVector& y,
                                      const SampledSignal& f);

// u_f(t) = (1/sqrt(2 pi)) int e^{i (s alpha(t) + beta(t))} fhat(s) ds.
Vector evaluate_field(const NormalizedPencil& pencil, const SampledSignal& f,
                      const RealVector& t);

// Field values at tau * x + y for arbitrary abscissae tau (no interpolation,
// one frequency quadrature per point).
std::vector<Vector> field_on_line(const NormalizedPencil& pencil,
                                  const SampledSignal& f, const RealVector& x,
                                  const RealVector& y,
                                  const std::vector<double>& taus);

// Rapidly decaying E-valued test field on R^d with numerical support in the
// box [-half_width, half_width]^d.
struct TestField {
  std::function<Vector(const RealVector&)> eval;
  double half_width = 0.0;
  int samples_per_axis = 0;
};

// | box quadrature of <field, psi>  -  iterated line/offset quadrature via
// Lambda(xi, eta) | / ||psi||, xi normalized to unit length.
double slice_pairing_check(const NormalizedPencil& pencil,
                           const SampledSignal& f, const RealVector& xi,
                           const TestField& psi);

}  // namespace vesselkit
