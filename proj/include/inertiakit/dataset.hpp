#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "inertiakit/types.hpp"

namespace inertiakit {

// Per-area deviation signals on a shared uniform time grid: speed deviation
// of the area COI frequency (pu on nominal frequency) and deviation of the
// area's electrical power export (pu on the system MVA base). Input to all
// estimators.
struct AreaDataset {
  std::vector<std::string> area_ids;
  std::vector<SignalTrace> speed_dev;
  std::vector<SignalTrace> power_dev;

  std::size_t n_areas() const { return area_ids.size(); }
  std::size_t sample_count() const { return speed_dev.empty() ? 0 : speed_dev.front().size(); }
  double dt() const { return speed_dev.empty() ? 0.0 : speed_dev.front().dt; }
  double t0() const { return speed_dev.empty() ? 0.0 : speed_dev.front().t0; }
};

inline void check_dataset(const AreaDataset& ds) {
  if (ds.area_ids.empty()) throw ConfigError("dataset: no areas");
  if (ds.speed_dev.size() != ds.area_ids.size() || ds.power_dev.size() != ds.area_ids.size())
    throw ConfigError("dataset: trace count does not match area count");
  const double dt = ds.speed_dev.front().dt;
  const double t0 = ds.speed_dev.front().t0;
  const std::size_t m = ds.speed_dev.front().size();
  for (std::size_t i = 0; i < ds.area_ids.size(); ++i) {
    check_trace(ds.speed_dev[i], "dataset speed trace " + ds.area_ids[i]);
    check_trace(ds.power_dev[i], "dataset power trace " + ds.area_ids[i]);
    for (const SignalTrace* t : {&ds.speed_dev[i], &ds.power_dev[i]}) {
      if (t->size() != m || std::abs(t->dt - dt) > 1e-12 || std::abs(t->t0 - t0) > 1e-9)
        throw ConfigError("dataset: traces do not share time grid");
    }
  }
  // Enough snapshots for a full-rank decomposition of the stacked signals.
  if (m < 2 * (2 * ds.area_ids.size()) + 2)
    throw ConfigError("dataset: too few samples for the stacked snapshot matrix");
}

// Slice [first, last) of every trace; clock keeps absolute time.
inline AreaDataset slice_dataset(const AreaDataset& ds, std::size_t first, std::size_t last) {
  AreaDataset out;
  out.area_ids = ds.area_ids;
  auto cut = [&](const SignalTrace& t) {
    SignalTrace s;
    s.dt = t.dt;
    s.t0 = t.time_at(first);
    s.values.assign(t.values.begin() + static_cast<std::ptrdiff_t>(first),
                    t.values.begin() + static_cast<std::ptrdiff_t>(last));
    return s;
  };
  for (const auto& t : ds.speed_dev) out.speed_dev.push_back(cut(t));
  for (const auto& t : ds.power_dev) out.power_dev.push_back(cut(t));
  return out;
}

}  // namespace inertiakit
