#include "vesselkit/grid.hpp"

#include <cmath>

namespace vesselkit {

GridSpec::GridSpec(int n_, double half_width_) : n(n_), half_width(half_width_) {
  if (n <= 0 || (n & (n - 1)) != 0)
    throw Error(ErrorCode::DimensionMismatch, "grid: N must be a power of two");
  if (half_width <= 0.0)
    throw Error(ErrorCode::DimensionMismatch, "grid: L must be positive");
}

SampledSignal::SampledSignal(const GridSpec& g, int dim) : grid(g) {
  values.assign(g.n, Vector::Zero(dim));
}

double SampledSignal::norm_squared() const {
  double sum = 0.0;
  for (const auto& v : values) sum += v.squaredNorm();
  return grid.step() * sum;
}

double SampledSignal::norm() const { return std::sqrt(norm_squared()); }

SampledSignal& SampledSignal::operator+=(const SampledSignal& other) {
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += other.values[k];
  return *this;
}

SampledSignal& SampledSignal::operator-=(const SampledSignal& other) {
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= other.values[k];
  return *this;
}

SampledSignal& SampledSignal::operator*=(Complex scale) {
  for (auto& v : values) v *= scale;
  return *this;
}

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
  SampledSignal out = a;
  out -= b;
  return out;
}

void fft_radix2(std::vector<Complex>& data, int sign) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double angle = sign * 2.0 * M_PI / static_cast<double>(len);
    Complex w_len = std::polar(1.0, angle);
    for (std::size_t start = 0; start < n; start += len) {
      Complex w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex even = data[start + k];
        Complex odd = data[start + k + len / 2] * w;
        data[start + k] = even + odd;
        data[start + k + len / 2] = even - odd;
        w *= w_len;
      }
    }
  }
}

namespace {

// Both directions share the pre/post (-1)^k twiddle that recenters the
// transform; c_n = (-1)^{N/2} absorbs e^{-i pi N / 2}. The output lives on
// the reciprocal grid, so the pair is exactly unitary in the grid norms.
SampledSignal centered_transform(const SampledSignal& f, int sign) {
  const int n = f.grid.n;
  const int m = f.dim();
  double scale = f.grid.step() / std::sqrt(2.0 * M_PI);
  SampledSignal out(GridSpec(n, f.grid.nyquist()), m);
  double parity = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  std::vector<Complex> line(n);
  for (int c = 0; c < m; ++c) {
    for (int k = 0; k < n; ++k)
      line[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.values[k](c);
    fft_radix2(line, sign);
    for (int k = 0; k < n; ++k)
      out.values[k](c) =
          scale * parity * (k % 2 == 0 ? 1.0 : -1.0) * line[k];
  }
  return out;
}

}  // namespace

SampledSignal forward_fft(const SampledSignal& f) {
  return centered_transform(f, -1);
}

SampledSignal inverse_fft(const SampledSignal& fhat) {
  return centered_transform(fhat, +1);
}

DecayReport decay_report(const SampledSignal& f) {
  DecayReport report;
  double total = 0.0, time_tail = 0.0;
  for (int k = 0; k < f.grid.n; ++k) {
    double e = f.values[k].squaredNorm();
    total += e;
    if (std::abs(f.grid.node(k)) > 0.5 * f.grid.half_width) time_tail += e;
  }
  SampledSignal fhat = forward_fft(f);
  double ftotal = 0.0, freq_tail = 0.0;
  for (int k = 0; k < f.grid.n; ++k) {
    double e = fhat.values[k].squaredNorm();
    ftotal += e;
    if (std::abs(fhat.grid.node(k)) > 0.5 * fhat.grid.half_width)
      freq_tail += e;
  }
  report.time_tail = total > 0.0 ? time_tail / total : 0.0;
  report.freq_tail = ftotal > 0.0 ? freq_tail / ftotal : 0.0;
  report.nyquist_ok = report.time_tail < 1e-8 && report.freq_tail < 1e-8;
  return report;
}

SampledSignal roll(const SampledSignal& f, int shift) {
  const int n = f.grid.n;
  SampledSignal out(f.grid, f.dim());
  for (int k = 0; k < n; ++k) {
    int src = ((k + shift) % n + n) % n;
    out.values[k] = f.values[src];
  }
  return out;
}

SampledSignal gaussian_signal(const GridSpec& grid, double center, double width,
                              const Vector& direction) {
  SampledSignal f(grid, static_cast<int>(direction.size()));
  for (int k = 0; k < grid.n; ++k) {
    double t = grid.node(k);
    double x = (t - center) / width;
    f.values[k] = std::exp(-0.5 * x * x) * direction;
  }
  return f;
}

}  // namespace vesselkit
