#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace inertiakit {

// Error categories with CLI exit-code semantics: configuration/input problems
// map to exit code 1, simulation failures to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct SimulationError : Error {
  using Error::Error;
};

// Uniformly sampled signal. `values` are pu quantities (speed deviation on
// nominal frequency, or power deviation on the system MVA base), `dt` the
// sample interval in seconds, `t0` the absolute time of the first sample.
struct SignalTrace {
  std::vector<double> values;
  double dt = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double nyquist_hz() const { return 0.5 / dt; }
};

inline void check_trace(const SignalTrace& trace, const std::string& what) {
  if (trace.values.empty()) throw ConfigError(what + ": empty trace");
  if (!(trace.dt > 0.0)) throw ConfigError(what + ": sample interval must be positive");
  for (double v : trace.values)
    if (!std::isfinite(v)) throw ConfigError(what + ": non-finite sample");
}

enum class DisturbanceKind { LoadStep, BusFault };

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::LoadStep;
  std::string bus;
  // pu power change for LoadStep, fault shunt admittance magnitude for BusFault
  double magnitude = 0.0;
  double t_start_s = 1.0;
  double t_clear_s = 0.0;  // BusFault only

  // Anchor used by estimators that count samples from the end of the event.
  double effective_clear_s() const {
    return kind == DisturbanceKind::BusFault ? t_clear_s : t_start_s;
  }
};

inline void check_disturbance(const DisturbanceSpec& d) {
  if (d.magnitude == 0.0) throw ConfigError("disturbance: magnitude must be nonzero");
  if (d.kind == DisturbanceKind::BusFault && !(d.t_clear_s > d.t_start_s))
    throw ConfigError("disturbance: t_clear must be greater than t_start");
  if (!(d.t_start_s >= 0.0)) throw ConfigError("disturbance: t_start must be non-negative");
}

struct NoiseSpec {
  double sigma = 0.0;  // pu standard deviation
  std::uint64_t seed = 0;
};

inline void check_noise(const NoiseSpec& n) {
  if (!(n.sigma >= 0.0)) throw ConfigError("noise: sigma must be non-negative");
}

struct FilterSpec {
  double cutoff_hz = 5.0;
  int order = 2;
};

inline void check_filter(const FilterSpec& f) {
  if (!(f.cutoff_hz > 0.0)) throw ConfigError("filter: cutoff must be positive");
  if (f.order < 1) throw ConfigError("filter: order must be at least 1");
}

}  // namespace inertiakit
