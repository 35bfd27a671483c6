#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inertiakit/dataset.hpp"
#include "inertiakit/est/dmd.hpp"
#include "inertiakit/est/osc.hpp"
#include "inertiakit/est/sysid.hpp"
#include "inertiakit/grid.hpp"
#include "inertiakit/signal/butterworth.hpp"
#include "inertiakit/signal/noise.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::bench {

// Sweepable hyperparameters, one per estimation method.
inline constexpr const char* kSweepSysIdPolyOrder = "sysid.N_p";
inline constexpr const char* kSweepDmdStartIndex = "dmd.start_index";
inline constexpr const char* kSweepOscBandwidth = "osc.bandwidth_B";

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

// One entry of a time-varying operating-condition profile: every load is
// scaled by load_scale and the listed generators are taken offline (which
// changes the true area inertias).
struct ProfileEntry {
  int hour = 0;
  double load_scale = 1.0;
  std::vector<std::string> offline_generators;
};

// Everything needed to run one benchmark scenario end to end.
struct ScenarioConfig {
  std::string id;
  GridModel model;
  DisturbanceSpec disturbance;
  double duration_s = 10.0;
  double measurement_rate_hz = 60.0;
  std::optional<NoiseSpec> noise;     // absent: clean measurements
  std::optional<FilterSpec> filter;   // absent: unfiltered
  bool sysid_enabled = true;
  bool dmd_enabled = true;
  bool osc_enabled = true;
  est::SysIdConfig sysid;
  est::DmdConfig dmd;
  est::OscillationConfig osc;
  std::optional<SweepSpec> sweep;
};

inline bool sweep_parameter_known(const std::string& p) {
  return p == kSweepSysIdPolyOrder || p == kSweepDmdStartIndex || p == kSweepOscBandwidth;
}

inline void check_scenario(const ScenarioConfig& cfg) {
  require_valid(cfg.model);
  check_disturbance(cfg.disturbance);
  if (!(cfg.duration_s > 0.0)) throw ConfigError("scenario: duration must be positive");
  if (!(cfg.measurement_rate_hz > 0.0))
    throw ConfigError("scenario: measurement rate must be positive");
  if (cfg.noise) check_noise(*cfg.noise);
  if (cfg.filter) check_filter(*cfg.filter);
  if (!cfg.sysid_enabled && !cfg.dmd_enabled && !cfg.osc_enabled)
    throw ConfigError("scenario: at least one estimator must be enabled");
  if (cfg.sweep) {
    if (!sweep_parameter_known(cfg.sweep->parameter))
      throw ConfigError("scenario: unknown sweep parameter '" + cfg.sweep->parameter + "'");
    if (cfg.sweep->values.empty()) throw ConfigError("scenario: sweep needs at least one value");
    const bool owner_enabled =
        (cfg.sweep->parameter == kSweepSysIdPolyOrder && cfg.sysid_enabled) ||
        (cfg.sweep->parameter == kSweepDmdStartIndex && cfg.dmd_enabled) ||
        (cfg.sweep->parameter == kSweepOscBandwidth && cfg.osc_enabled);
    if (!owner_enabled)
      throw ConfigError("scenario: sweep parameter belongs to a disabled estimator");
  }
}

// Measurement-channel emulation: independent Gaussian noise per trace (seeds
// derived deterministically from the base seed by trace position), then the
// zero-phase low-pass. Either stage is skipped when its spec is absent.
inline AreaDataset condition_dataset(const AreaDataset& ds, const std::optional<NoiseSpec>& noise,
                                     const std::optional<FilterSpec>& filter) {
  AreaDataset out = ds;
  const std::size_t na = ds.n_areas();
  if (noise && noise->sigma > 0.0) {
    for (std::size_t a = 0; a < na; ++a) {
      NoiseSpec speed_spec{noise->sigma, noise->seed + 1000003 * static_cast<std::uint64_t>(a)};
      NoiseSpec power_spec{noise->sigma,
                           noise->seed + 1000003 * static_cast<std::uint64_t>(na + a)};
      out.speed_dev[a] = signal::add_noise(out.speed_dev[a], speed_spec);
      out.power_dev[a] = signal::add_noise(out.power_dev[a], power_spec);
    }
  }
  if (filter) {
    for (std::size_t a = 0; a < na; ++a) {
      out.speed_dev[a] = signal::lowpass(out.speed_dev[a], *filter);
      out.power_dev[a] = signal::lowpass(out.power_dev[a], *filter);
    }
  }
  return out;
}

}  // namespace inertiakit::bench
