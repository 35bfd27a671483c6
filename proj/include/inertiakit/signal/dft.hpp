#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "inertiakit/types.hpp"

namespace inertiakit::signal {

// One-sided spectrum of a real trace. Coefficients carry the dt scaling of
// the continuous-transform approximation X(f) ≈ dt·Σ x_k·e^{−j2πf·k·dt}, so
// the frequency axis is in Hz and amplitudes are continuous-spectrum-like.
struct Spectrum {
  std::vector<double> frequencies;             // 0 .. Nyquist, spacing 1/(M·dt)
  std::vector<std::complex<double>> coeff;     // size ⌊M/2⌋+1
  double dt = 0.0;                             // source sample spacing [s]
  std::size_t source_length = 0;               // M of the source trace

  std::size_t size() const { return coeff.size(); }
  double bin_spacing_hz() const { return 1.0 / (static_cast<double>(source_length) * dt); }
};

// Direct one-sided DFT. Angles are reduced with integer arithmetic
// ((k·n) mod M) so exact-bin sinusoids stay orthogonal to near machine
// precision; the records involved are short enough that the O(M²) sum is
// cheap and bit-reproducible.
inline Spectrum dft(const SignalTrace& trace) {
  check_trace(trace, "dft");
  const std::size_t m = trace.size();
  const std::size_t n_bins = m / 2 + 1;

  Spectrum spec;
  spec.dt = trace.dt;
  spec.source_length = m;
  spec.frequencies.resize(n_bins);
  spec.coeff.resize(n_bins);

  const double base = 1.0 / (static_cast<double>(m) * trace.dt);
  for (std::size_t k = 0; k < n_bins; ++k) {
    spec.frequencies[k] = static_cast<double>(k) * base;
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t n = 0; n < m; ++n) {
      const std::size_t r = (k * n) % m;
      const double angle = -2.0 * M_PI * static_cast<double>(r) / static_cast<double>(m);
      acc += trace.values[n] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    spec.coeff[k] = trace.dt * acc;
  }
  return spec;
}

// Inverse of dft() for round-trip checks: rebuilds the two-sided spectrum by
// conjugate symmetry and evaluates the synthesis sum.
inline SignalTrace inverse_dft(const Spectrum& spec, double t0 = 0.0) {
  const std::size_t m = spec.source_length;
  if (m < 2 || spec.coeff.size() != m / 2 + 1)
    throw ConfigError("inverse_dft: inconsistent spectrum dimensions");

  SignalTrace out;
  out.dt = spec.dt;
  out.t0 = t0;
  out.values.resize(m);

  const double scale = 1.0 / (static_cast<double>(m) * spec.dt);
  for (std::size_t n = 0; n < m; ++n) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t idx = (k <= m / 2) ? k : m - k;
      std::complex<double> c = spec.coeff[idx];
      if (k > m / 2) c = std::conj(c);
      const std::size_t r = (k * n) % m;
      const double angle = 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(m);
      acc += c * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out.values[n] = scale * acc.real();
  }
  return out;
}

// Two-sided spectral energy Σ|X|²·Δf, folding the one-sided coefficients.
// Parseval: equals Σ|x_k|²·dt for the source trace.
inline double spectrum_energy(const Spectrum& spec) {
  const std::size_t m = spec.source_length;
  const double df = spec.bin_spacing_hz();
  double energy = 0.0;
  for (std::size_t k = 0; k < spec.coeff.size(); ++k) {
    const bool shared = (k == 0) || (m % 2 == 0 && k == m / 2);
    const double weight = shared ? 1.0 : 2.0;
    energy += weight * std::norm(spec.coeff[k]) * df;
  }
  return energy;
}

}  // namespace inertiakit::signal
