#pragma once

// Uniform sampling of the line and the centered unitary Fourier transform.
//
// Conventions (fixed; identities are reproducible bit-for-bit given N, L):
//   nodes      t_k = -L + k * Delta,        Delta = 2L/N,   k = 0..N-1
//   frequencies s_k = pi (k - N/2) / L      (same layout, centered)
//   forward    fhat(s_k) = (Delta/sqrt(2 pi)) sum_n f(t_n) e^{-i s_k t_n}
//   inverse    f(t_n) = (Delta_s/sqrt(2 pi)) sum_k fhat(s_k) e^{+i s_k t_n}
// With Delta * Delta_s * N = 2 pi the pair is exactly unitary:
// Delta_s sum ||fhat||^2 = Delta sum ||f||^2 to rounding.

#include <vector>

#include "vesselkit/linalg.hpp"

namespace vesselkit {

struct GridSpec {
  int n = 0;       // sample count, power of two
  double half_width = 0.0;  // L

  GridSpec() = default;
  GridSpec(int n_, double half_width_);

  double step() const { return 2.0 * half_width / n; }
  double freq_step() const { return M_PI / half_width; }
  double node(int k) const { return -half_width + k * step(); }
  double freq_node(int k) const { return (k - n / 2) * freq_step(); }
  double nyquist() const { return M_PI / step(); }
  int zero_node() const { return n / 2; }

  bool operator==(const GridSpec& other) const {
    return n == other.n && half_width == other.half_width;
  }
};

struct SampledSignal {
  GridSpec grid;
  std::vector<Vector> values;  // grid.n entries in C^m

  SampledSignal() = default;
  SampledSignal(const GridSpec& g, int dim);

  int dim() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }

  // Delta * sum ||values||^2.
  double norm_squared() const;
  double norm() const;

  SampledSignal& operator+=(const SampledSignal& other);
  SampledSignal& operator-=(const SampledSignal& other);
  SampledSignal& operator*=(Complex scale);
};

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b);

// Fraction of signal energy in |t| > half_width/2 (time tail) and, of the
// transformed signal, in |s| > nyquist/2 (frequency tail). A signal is
// acceptance-grade when both are below 1e-8.
struct DecayReport {
  double time_tail = 0.0;
  double freq_tail = 0.0;
  bool nyquist_ok = false;
};

DecayReport decay_report(const SampledSignal& f);

// Centered unitary transforms in the conventions above.
SampledSignal forward_fft(const SampledSignal& f);
SampledSignal inverse_fft(const SampledSignal& fhat);

// In-place radix-2 transform of one component line; sign -1 forward kernel
// e^{-2 pi i k n / N}, +1 inverse kernel (unscaled).
void fft_radix2(std::vector<Complex>& data, int sign);

// Circular roll: out[k] = in[(k + shift) mod N], the exact grid action of a
// shift by shift * Delta.
SampledSignal roll(const SampledSignal& f, int shift);

// Gaussian bump exp(-(t - center)^2 / (2 width^2)) * direction.
SampledSignal gaussian_signal(const GridSpec& grid, double center, double width,
                              const Vector& direction);

}  // namespace vesselkit
