#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "inertiakit/types.hpp"

namespace inertiakit::signal {

// One second-order section of an IIR cascade; first-order sections carry
// b2 = a2 = 0.
struct Sos {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

namespace detail {

// Butterworth low-pass designed by bilinear transform with frequency
// prewarping, returned as a cascade of second-order sections. Each section's
// numerator is renormalized so the overall DC gain is exactly 1.
inline std::vector<Sos> butterworth_lowpass_sections(int order, double cutoff_hz, double dt) {
  const double warped = 2.0 / dt * std::tan(M_PI * cutoff_hz * dt);  // rad/s
  std::vector<Sos> sections;
  const int n_pairs = order / 2;
  for (int k = 0; k < n_pairs; ++k) {
    // analog pole pair at angle theta from the negative real axis
    const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * order);
    const double re = -warped * std::cos(theta);
    const double im = warped * std::sin(theta);
    // bilinear transform of wc^2 / (s^2 - 2 re s + |p|^2)
    const double K = 2.0 / dt;
    const double p2 = re * re + im * im;  // = warped^2
    const double a0 = K * K - 2.0 * re * K + p2;
    Sos s;
    s.b0 = p2 / a0;
    s.b1 = 2.0 * p2 / a0;
    s.b2 = p2 / a0;
    s.a1 = (2.0 * p2 - 2.0 * K * K) / a0;
    s.a2 = (K * K + 2.0 * re * K + p2) / a0;
    const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    s.b0 /= dc;
    s.b1 /= dc;
    s.b2 /= dc;
    sections.push_back(s);
  }
  if (order % 2 == 1) {
    // real pole at -warped: wc / (s + wc)
    const double K = 2.0 / dt;
    const double a0 = K + warped;
    Sos s;
    s.b0 = warped / a0;
    s.b1 = warped / a0;
    s.a1 = (warped - K) / a0;
    const double dc = (s.b0 + s.b1) / (1.0 + s.a1);
    s.b0 /= dc;
    s.b1 /= dc;
    sections.push_back(s);
  }
  return sections;
}

// Direct-form II transposed, with the state preloaded to the step steady
// state of the first input value so constant signals pass through unchanged.
inline void filter_in_place(const std::vector<Sos>& sections, std::vector<double>& x) {
  for (const auto& s : sections) {
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    double z1 = (gain - s.b0) * x.front();
    double z2 = (s.b2 - s.a2 * gain) * x.front();
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace detail

// Zero-phase (forward-backward) Butterworth low-pass. Output has the input's
// length. Both ends are padded with the odd (point-symmetric) reflection of
// the signal about its end value, which continues value and slope smoothly:
// even reflection would kink a sloping record and the pass ending at that
// edge would smear the kink back into the retained samples. The pad spans two
// cutoff periods so the edge transient has died before real data begins.
inline SignalTrace lowpass(const SignalTrace& trace, const FilterSpec& spec) {
  check_trace(trace, "lowpass");
  check_filter(spec);
  if (!(spec.cutoff_hz < trace.nyquist_hz()))
    throw ConfigError("lowpass: cutoff must be below the Nyquist frequency");

  const auto sections = detail::butterworth_lowpass_sections(spec.order, spec.cutoff_hz, trace.dt);
  const std::size_t m = trace.size();
  const std::size_t pad = std::min<std::size_t>(
      static_cast<std::size_t>(std::ceil(2.0 / (spec.cutoff_hz * trace.dt))), m - 1);

  std::vector<double> work;
  work.reserve(m + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k)
    work.push_back(2.0 * trace.values.front() - trace.values[k]);
  work.insert(work.end(), trace.values.begin(), trace.values.end());
  for (std::size_t k = 1; k <= pad; ++k)
    work.push_back(2.0 * trace.values.back() - trace.values[m - 1 - k]);

  detail::filter_in_place(sections, work);
  std::reverse(work.begin(), work.end());
  detail::filter_in_place(sections, work);
  std::reverse(work.begin(), work.end());

  SignalTrace out;
  out.dt = trace.dt;
  out.t0 = trace.t0;
  out.values.assign(work.begin() + static_cast<std::ptrdiff_t>(pad),
                    work.begin() + static_cast<std::ptrdiff_t>(pad + m));
  return out;
}

// Two-pass magnitude response of the zero-phase filter at frequency f, from
// the analog prototype: 1 / (1 + (f/fc)^(2n)). Useful as a test oracle and
// for documenting expected attenuation.
inline double lowpass_two_pass_gain(const FilterSpec& spec, double f_hz) {
  return 1.0 / (1.0 + std::pow(f_hz / spec.cutoff_hz, 2.0 * spec.order));
}

}  // namespace inertiakit::signal
