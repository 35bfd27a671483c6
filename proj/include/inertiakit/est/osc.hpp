#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "inertiakit/dataset.hpp"
#include "inertiakit/estimate.hpp"
#include "inertiakit/signal/dft.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::est {

struct OscillationConfig {
  double bandwidth_hz = 2.0;  // upper edge of the summed oscillation band
  bool include_dc = false;    // sum the zero-frequency bin too (degenerate balance)
};

// Band-limited Fourier balance of the incremental swing equation: summing
// the per-bin balance 2H·(j2πγ)·Δω(γ) + D·Δω(γ) + ΔP(γ) = 0 over the band
// 0 < γ ≤ B gives one complex equation per area whose real/imaginary split
// is solved for H̃; the damping that back-substitution implies is kept as a
// diagnostic only. The derivative factor uses the angular frequency 2πγ
// with γ in Hz, matching the dt-scaled transform convention.
inline InertiaEstimate estimate_osc(const AreaDataset& dataset, const OscillationConfig& cfg = {}) {
  check_dataset(dataset);
  if (!(cfg.bandwidth_hz > 0.0))
    throw ConfigError("oscillation estimate: bandwidth must be positive");
  const double nyquist = 0.5 / dataset.dt();
  if (cfg.bandwidth_hz > nyquist + 1e-12)
    throw ConfigError("oscillation estimate: bandwidth exceeds the Nyquist frequency");
  const double bin_spacing =
      1.0 / (static_cast<double>(dataset.sample_count()) * dataset.dt());
  if (bin_spacing > cfg.bandwidth_hz / 5.0 + 1e-15)
    throw ConfigError("oscillation estimate: record too short to resolve the band (need >= 5 bins)");

  InertiaEstimate out;
  out.method = Method::Osc;
  out.hyperparameters["bandwidth_hz"] = cfg.bandwidth_hz;
  out.hyperparameters["include_dc"] = cfg.include_dc ? 1.0 : 0.0;

  for (std::size_t a = 0; a < dataset.n_areas(); ++a) {
    AreaEstimate est;
    est.area = dataset.area_ids[a];
    const signal::Spectrum spec_w = signal::dft(dataset.speed_dev[a]);
    const signal::Spectrum spec_p = signal::dft(dataset.power_dev[a]);

    std::complex<double> sum_w(0.0, 0.0), sum_p(0.0, 0.0), sum_dw(0.0, 0.0);
    int bins = 0;
    for (std::size_t k = 0; k < spec_w.size(); ++k) {
      const double gamma = spec_w.frequencies[k];
      if (gamma > cfg.bandwidth_hz + 1e-12) break;
      if (k == 0 && !cfg.include_dc) continue;
      sum_w += spec_w.coeff[k];
      sum_p += spec_p.coeff[k];
      sum_dw += std::complex<double>(0.0, 2.0 * M_PI * gamma) * spec_w.coeff[k];
      ++bins;
    }
    est.diagnostics["bins_in_band"] = bins;

    const double numerator =
        sum_w.real() * sum_p.imag() - sum_p.real() * sum_w.imag();
    const double denominator =
        2.0 * (sum_dw.real() * sum_w.imag() - sum_w.real() * sum_dw.imag());
    const double scale = std::abs(numerator) + std::abs(denominator);
    if (scale == 0.0 || std::abs(denominator) <= 1e-12 * std::abs(numerator)) {
      est.failure = "no resolvable oscillation";
      out.areas.push_back(std::move(est));
      continue;
    }

    const double h_est = numerator / denominator;
    if (std::abs(sum_w.imag()) > 1e-300)
      est.diagnostics["damping_diag"] =
          -(2.0 * h_est * sum_dw.imag() + sum_p.imag()) / sum_w.imag();
    if (!(h_est > 0.0)) {
      est.failure = "non-physical inertia";
      out.areas.push_back(std::move(est));
      continue;
    }
    est.inertia_s = h_est;
    out.areas.push_back(std::move(est));
  }
  return out;
}

}  // namespace inertiakit::est
