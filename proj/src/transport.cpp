#include "vesselkit/transport.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace vesselkit {

int worker_count() {
  const char* env = std::getenv("VESSELKIT_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

namespace {

// Output nodes are independent; each node's frequency sum stays in fixed
// order, so the result does not depend on the worker count.
void parallel_over_nodes(int count, const std::function<void(int)>& body) {
  int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      for (int i = w; i < count; i += workers) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

SpectrumCache::SpectrumCache(const NormalizedPencil& pencil,
                             const GridSpec& fg, const RealVector& x)
    : freq_grid(fg), direction(x) {
  Matrix ax = pencil.alpha_of(x);
  Matrix bx = pencil.beta_of(x);
  nodes.reserve(fg.n);
  for (int k = 0; k < fg.n; ++k)
    nodes.push_back(herm_eig(fg.node(k) * ax + bx));
}

double SpectrumCache::reconstruction_defect(
    const NormalizedPencil& pencil) const {
  Matrix ax = pencil.alpha_of(direction);
  Matrix bx = pencil.beta_of(direction);
  double worst = 0.0;
  for (int k = 0; k < freq_grid.n; ++k) {
    Matrix m = freq_grid.node(k) * ax + bx;
    Matrix rebuilt =
        nodes[k].vectors *
        nodes[k].values.asDiagonal().toDenseMatrix().cast<Complex>() *
        nodes[k].vectors.adjoint();
    worst = std::max(worst, (rebuilt - m).norm() / std::max(1.0, m.norm()));
  }
  return worst;
}

SampledSignal apply_pi(const NormalizedPencil& pencil, const RealVector& t,
                       const SampledSignal& f, bool* aliasing_risk) {
  if (aliasing_risk) *aliasing_risk = !decay_report(f).nyquist_ok;
  SampledSignal fhat = forward_fft(f);
  Matrix at = pencil.alpha_of(t);
  Matrix bt = pencil.beta_of(t);
  for (int k = 0; k < fhat.grid.n; ++k) {
    HermEig eig = herm_eig(fhat.grid.node(k) * at + bt);
    Vector w = eig.vectors.adjoint() * fhat.values[k];
    for (int i = 0; i < w.size(); ++i)
      w(i) *= std::polar(1.0, eig.values(i));
    fhat.values[k] = eig.vectors * w;
  }
  return inverse_fft(fhat);
}

SampledSignal lambda_op(const NormalizedPencil& pencil, const RealVector& x,
                        const RealVector& y, const SampledSignal& f,
                        const GridSpec& out_grid, LambdaFlags* flags) {
  const int m = pencil.dim_e;
  Matrix ax = pencil.alpha_of(x);
  Matrix bx = pencil.beta_of(x);

  LambdaFlags local;
  local.isometric_direction = lambda_min(ax) > 0.0;
  local.aliasing_risk = !decay_report(f).nyquist_ok;

  SampledSignal ghat = forward_fft(f);
  if (y.cwiseAbs().maxCoeff() != 0.0) {
    Matrix ay = pencil.alpha_of(y);
    Matrix by = pencil.beta_of(y);
    for (int k = 0; k < ghat.grid.n; ++k) {
      HermEig eig = herm_eig(ghat.grid.node(k) * ay + by);
      Vector w = eig.vectors.adjoint() * ghat.values[k];
      for (int i = 0; i < m; ++i) w(i) *= std::polar(1.0, eig.values(i));
      ghat.values[k] = eig.vectors * w;
    }
  }

  Matrix id = Matrix::Identity(m, m);
  bool trivial_pencil = (ax - id).norm() < 1e-14 && bx.norm() < 1e-14;
  if (trivial_pencil && out_grid == f.grid) {
    local.fast_path = true;
    if (flags) *flags = local;
    return inverse_fft(ghat);
  }

  // Direct quadrature:
  // out(tau_l) = (ds/sqrt(2 pi)) sum_k U_k e^{i tau_l L_k} U_k^* g_k.
  SpectrumCache cache(pencil, ghat.grid, x);
  const int nfreq = ghat.grid.n;
  std::vector<Vector> rotated(nfreq);
  for (int k = 0; k < nfreq; ++k)
    rotated[k] = cache.nodes[k].vectors.adjoint() * ghat.values[k];

  SampledSignal out(out_grid, m);
  double scale = ghat.grid.step() / std::sqrt(2.0 * M_PI);
  parallel_over_nodes(out_grid.n, [&](int l) {
    double tau = out_grid.node(l);
    Vector acc = Vector::Zero(m);
    Vector phased(m);
    for (int k = 0; k < nfreq; ++k) {
      const HermEig& eig = cache.nodes[k];
      for (int i = 0; i < m; ++i)
        phased(i) = std::polar(1.0, tau * eig.values(i)) * rotated[k](i);
      acc.noalias() += eig.vectors * phased;
    }
    out.values[l] = scale * acc;
  });
  if (flags) *flags = local;
  return out;
}

SplitNorms weighted_norms(const SampledSignal& f, const Matrix& weight,
                          double split_at) {
  SplitNorms out;
  const double delta = f.grid.step();
  int nearest =
      static_cast<int>(std::lround((split_at + f.grid.half_width) / delta));
  nearest = std::max(0, std::min(f.grid.n - 1, nearest));
  for (int k = 0; k < f.grid.n; ++k) {
    double term = delta * std::real(f.values[k].dot(weight * f.values[k]));
    if (k < nearest)
      out.left += term;
    else if (k > nearest)
      out.right += term;
    else {
      out.left += 0.5 * term;
      out.right += 0.5 * term;
    }
  }
  out.full = out.left + out.right;
  return out;
}

CausalResiduals causal_isometry_check(const NormalizedPencil& pencil,
                                      const RealVector& x,
                                      const RealVector& x_prime,
                                      const RealVector& y,
                                      const SampledSignal& f) {
  CausalResiduals out;
  SampledSignal gx = lambda_op(pencil, x, y, f, f.grid, &out.flags_x);
  SampledSignal gxp =
      lambda_op(pencil, x_prime, y, f, f.grid, &out.flags_xprime);
  SplitNorms nx = weighted_norms(gx, pencil.alpha_of(x), 0.0);
  SplitNorms nxp = weighted_norms(gxp, pencil.alpha_of(x_prime), 0.0);
  double denom = std::max(f.norm_squared(), 1e-300);
  out.positive = std::abs(nx.right - nxp.right) / denom;
  out.negative = std::abs(nx.left - nxp.left) / denom;
  return out;
}

Vector evaluate_field(const NormalizedPencil& pencil, const SampledSignal& f,
                      const RealVector& t) {
  SampledSignal fhat = forward_fft(f);
  Matrix at = pencil.alpha_of(t);
  Matrix bt = pencil.beta_of(t);
  Vector acc = Vector::Zero(pencil.dim_e);
  for (int k = 0; k < fhat.grid.n; ++k) {
    HermEig eig = herm_eig(fhat.grid.node(k) * at + bt);
    Vector w = eig.vectors.adjoint() * fhat.values[k];
    for (int i = 0; i < w.size(); ++i)
      w(i) *= std::polar(1.0, eig.values(i));
    acc += eig.vectors * w;
  }
  return fhat.grid.step() / std::sqrt(2.0 * M_PI) * acc;
}

// Field values at the points tau * x + y for a list of tau, by the same
// frequency quadrature as lambda_op but at arbitrary output abscissae.
std::vector<Vector> field_on_line(const NormalizedPencil& pencil,
                                  const SampledSignal& f, const RealVector& x,
                                  const RealVector& y,
                                  const std::vector<double>& taus) {
  const int m = pencil.dim_e;
  SampledSignal ghat = forward_fft(f);
  if (y.cwiseAbs().maxCoeff() != 0.0) {
    Matrix ay = pencil.alpha_of(y);
    Matrix by = pencil.beta_of(y);
    for (int k = 0; k < ghat.grid.n; ++k) {
      HermEig eig = herm_eig(ghat.grid.node(k) * ay + by);
      Vector w = eig.vectors.adjoint() * ghat.values[k];
      for (int i = 0; i < m; ++i) w(i) *= std::polar(1.0, eig.values(i));
      ghat.values[k] = eig.vectors * w;
    }
  }
  SpectrumCache cache(pencil, ghat.grid, x);
  std::vector<Vector> rotated(ghat.grid.n);
  for (int k = 0; k < ghat.grid.n; ++k)
    rotated[k] = cache.nodes[k].vectors.adjoint() * ghat.values[k];
  double scale = ghat.grid.step() / std::sqrt(2.0 * M_PI);

  std::vector<Vector> out(taus.size());
  parallel_over_nodes(static_cast<int>(taus.size()), [&](int l) {
    Vector acc = Vector::Zero(m);
    Vector phased(m);
    for (int k = 0; k < ghat.grid.n; ++k) {
      const HermEig& eig = cache.nodes[k];
      for (int i = 0; i < m; ++i)
        phased(i) = std::polar(1.0, taus[l] * eig.values(i)) * rotated[k](i);
      acc.noalias() += eig.vectors * phased;
    }
    out[l] = scale * acc;
  });
  return out;
}

double slice_pairing_check(const NormalizedPencil& pencil,
                           const SampledSignal& f, const RealVector& xi,
                           const TestField& psi) {
  const int d = pencil.d;
  RealVector unit = xi / xi.norm();

  const int q = psi.samples_per_axis;
  const double h = 2.0 * psi.half_width / q;
  std::vector<double> axis(q);  // cell midpoints
  for (int i = 0; i < q; ++i) axis[i] = -psi.half_width + (i + 0.5) * h;

  // Direct side: box quadrature of <psi(t), u_f(t)>, one first-axis row at a
  // time (the row restriction is a line transport in the e_1 direction).
  Complex direct = 0.0;
  double psi_norm_sq = 0.0;
  {
    RealVector e1 = RealVector::Zero(d);
    e1(0) = 1.0;
    std::vector<int> odo(d - 1, 0);  // odometer over t_2..t_d
    RealVector t(d);
    while (true) {
      RealVector offset = RealVector::Zero(d);
      for (int j = 0; j + 1 < d; ++j) offset(j + 1) = axis[odo[j]];
      std::vector<Vector> row = field_on_line(pencil, f, e1, offset, axis);
      for (int i = 0; i < q; ++i) {
        t = offset;
        t(0) = axis[i];
        Vector pv = psi.eval(t);
        direct += pv.dot(row[i]) * std::pow(h, d);
        psi_norm_sq += pv.squaredNorm() * std::pow(h, d);
      }
      int j = 0;
      while (j < d - 1 && ++odo[j] == q) odo[j++] = 0;
      if (j >= d - 1) break;
    }
  }

  // Iterated side: offsets eta over the hyperplane orthogonal to xi, line
  // parameter s along xi. For d = 1 the hyperplane is a point and both sides
  // are the same 1-D integral.
  Complex iterated = 0.0;
  if (d == 1) {
    std::vector<Vector> along =
        field_on_line(pencil, f, unit, RealVector::Zero(1), axis);
    for (int i = 0; i < q; ++i) {
      RealVector point(1);
      point(0) = axis[i];
      iterated += psi.eval(point).dot(along[i]) * h;
    }
  } else {
    Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(d, d);
    seed.col(0) = unit;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
    Eigen::MatrixXd frame = qr.householderQ();
    // HouseholderQR may flip the first column; realign it with unit.
    if ((frame.col(0) - unit).norm() > 1.0) frame = -frame;

    std::vector<int> eta_odo(d - 1, 0);
    while (true) {
      RealVector eta = RealVector::Zero(d);
      for (int j = 0; j < d - 1; ++j)
        eta += axis[eta_odo[j]] * frame.col(j + 1);
      SampledSignal along = lambda_op(pencil, unit, eta, f, f.grid);
      Complex inner = 0.0;
      for (int k = 0; k < f.grid.n; ++k) {
        RealVector point = f.grid.node(k) * unit + eta;
        inner += psi.eval(point).dot(along.values[k]) * f.grid.step();
      }
      iterated += inner * std::pow(h, d - 1);
      int j = 0;
      while (j < d - 1 && ++eta_odo[j] == q) eta_odo[j++] = 0;
      if (j == d - 1) break;
    }
  }

  return std::abs(direct - iterated) /
         std::max(std::sqrt(psi_norm_sq), 1e-300);
}

}  // namespace vesselkit
