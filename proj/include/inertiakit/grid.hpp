#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "inertiakit/types.hpp"

namespace inertiakit {

struct Bus {
  std::string id;
  double nominal_kv = 1.0;
};

// Machine parameters (inertia, damping, transient reactance) are on the
// machine rating base; mechanical power dispatch is on the system base.
struct Generator {
  std::string id;
  std::string bus;
  double rating_mva = 100.0;
  double inertia_s = 5.0;
  double damping_pu = 0.0;
  double xd_transient_pu = 0.3;
  double mech_power_pu = 0.0;
};

struct Line {
  std::string from;
  std::string to;
  double reactance_pu = 0.1;
};

// Constant-impedance active-power load, fixed at the solved operating point.
struct Load {
  std::string bus;
  double active_power_pu = 0.0;
};

struct GridModel {
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Line> lines;
  std::vector<Load> loads;
  std::map<std::string, std::string> areas;  // bus id -> area label
  double system_base_mva = 100.0;
  double nominal_frequency_hz = 60.0;

  int bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
      if (buses[i].id == id) return static_cast<int>(i);
    return -1;
  }

  const std::string* area_of_bus(const std::string& bus_id) const {
    auto it = areas.find(bus_id);
    return it == areas.end() ? nullptr : &it->second;
  }

  // Sorted unique area labels. Defines the canonical area ordering used by
  // datasets, estimators, and reports.
  std::vector<std::string> area_labels() const {
    std::set<std::string> labels;
    for (const auto& [bus, area] : areas)
      if (bus_index(bus) >= 0) labels.insert(area);
    return {labels.begin(), labels.end()};
  }
};

struct ValidationIssue {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

// Typical synchronous-machine parameter ranges; values outside produce
// warnings, not errors.
inline constexpr double kTypicalInertiaMinS = 1.75;
inline constexpr double kTypicalInertiaMaxS = 10.0;
inline constexpr double kTypicalDampingMin = 1e-2;
inline constexpr double kTypicalDampingMax = 1e-1;

namespace detail {

inline bool network_connected(const GridModel& model) {
  if (model.buses.size() <= 1) return true;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& line : model.lines) {
    adj[line.from].push_back(line.to);
    adj[line.to].push_back(line.from);
  }
  std::set<std::string> seen;
  std::queue<std::string> frontier;
  frontier.push(model.buses.front().id);
  seen.insert(model.buses.front().id);
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop();
    for (const auto& next : adj[cur])
      if (seen.insert(next).second) frontier.push(next);
  }
  return seen.size() == model.buses.size();
}

}  // namespace detail

// Structural findings are errors (the model cannot be simulated); parameter
// ranges outside typical machine values are warnings.
inline std::vector<ValidationIssue> validate(const GridModel& model) {
  using Sev = ValidationIssue::Severity;
  std::vector<ValidationIssue> issues;
  auto error = [&](std::string msg) { issues.push_back({Sev::Error, std::move(msg)}); };
  auto warn = [&](std::string msg) { issues.push_back({Sev::Warning, std::move(msg)}); };

  if (!(model.system_base_mva > 0.0)) error("system base must be positive");
  if (!(model.nominal_frequency_hz > 0.0)) error("nominal frequency must be positive");
  if (model.buses.empty()) error("model has no buses");
  if (model.generators.empty()) error("model has no generators");

  std::set<std::string> bus_ids;
  for (const auto& bus : model.buses)
    if (!bus_ids.insert(bus.id).second) error("duplicate bus id '" + bus.id + "'");

  std::set<std::string> gen_ids;
  for (const auto& gen : model.generators) {
    if (!gen_ids.insert(gen.id).second) error("duplicate generator id '" + gen.id + "'");
    if (model.bus_index(gen.bus) < 0)
      error("generator '" + gen.id + "' references unknown bus '" + gen.bus + "'");
    if (!(gen.rating_mva > 0.0)) error("generator '" + gen.id + "' has non-positive rating");
    if (!(gen.inertia_s > 0.0)) error("generator '" + gen.id + "' has non-positive inertia");
    if (!(gen.xd_transient_pu > 0.0))
      error("generator '" + gen.id + "' has non-positive transient reactance");
    if (gen.damping_pu < 0.0) error("generator '" + gen.id + "' has negative damping");
    if (gen.inertia_s > 0.0 &&
        (gen.inertia_s < kTypicalInertiaMinS || gen.inertia_s > kTypicalInertiaMaxS))
      warn("generator '" + gen.id + "' inertia outside typical range [1.75, 10] s");
    if (gen.damping_pu > 0.0 &&
        (gen.damping_pu < kTypicalDampingMin || gen.damping_pu > kTypicalDampingMax))
      warn("generator '" + gen.id + "' damping outside typical range [1e-2, 1e-1]");
  }

  for (const auto& line : model.lines) {
    if (model.bus_index(line.from) < 0)
      error("line references unknown bus '" + line.from + "'");
    if (model.bus_index(line.to) < 0) error("line references unknown bus '" + line.to + "'");
    if (line.from == line.to) error("line connects bus '" + line.from + "' to itself");
    if (!(line.reactance_pu > 0.0))
      error("line " + line.from + "-" + line.to + " has non-positive reactance");
  }

  for (const auto& load : model.loads) {
    if (model.bus_index(load.bus) < 0)
      error("load references unknown bus '" + load.bus + "'");
    if (load.active_power_pu < 0.0)
      warn("load at bus '" + load.bus + "' has negative active power");
  }

  for (const auto& bus : model.buses)
    if (!model.area_of_bus(bus.id)) error("bus '" + bus.id + "' has no area assignment");
  for (const auto& [bus, area] : model.areas)
    if (model.bus_index(bus) < 0)
      error("area map references unknown bus '" + bus + "'");

  if (!model.buses.empty() && !detail::network_connected(model))
    error("network graph is not connected");

  return issues;
}

inline bool has_errors(const std::vector<ValidationIssue>& issues) {
  return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.severity == ValidationIssue::Severity::Error;
  });
}

inline void require_valid(const GridModel& model) {
  auto issues = validate(model);
  for (const auto& issue : issues)
    if (issue.severity == ValidationIssue::Severity::Error)
      throw ConfigError("invalid grid model: " + issue.message);
}

struct AreaInertia {
  double system_base_s = 0.0;  // sum H_m * S_m / system base
  double area_base_s = 0.0;    // sum H_m * S_m / sum S_m (diagnostic)
  double rating_sum_mva = 0.0;
};

// Aggregate inertia per area. Areas without generators are absent from the
// returned map rather than reported as zero.
inline std::map<std::string, AreaInertia> true_area_inertia_detail(const GridModel& model) {
  std::map<std::string, AreaInertia> result;
  for (const auto& gen : model.generators) {
    const std::string* area = model.area_of_bus(gen.bus);
    if (!area) throw ConfigError("generator '" + gen.id + "' bus has no area assignment");
    auto& acc = result[*area];
    acc.system_base_s += gen.inertia_s * gen.rating_mva / model.system_base_mva;
    acc.area_base_s += gen.inertia_s * gen.rating_mva;
    acc.rating_sum_mva += gen.rating_mva;
  }
  for (auto& [area, acc] : result) acc.area_base_s /= acc.rating_sum_mva;
  return result;
}

inline std::map<std::string, double> true_area_inertia(const GridModel& model) {
  std::map<std::string, double> result;
  for (const auto& [area, detail] : true_area_inertia_detail(model))
    result[area] = detail.system_base_s;
  return result;
}

// Rating-weighted area damping on the system base; ground truth counterpart
// of the estimated damping factor.
inline std::map<std::string, double> true_area_damping(const GridModel& model) {
  std::map<std::string, double> result;
  for (const auto& gen : model.generators) {
    const std::string* area = model.area_of_bus(gen.bus);
    if (!area) throw ConfigError("generator '" + gen.id + "' bus has no area assignment");
    result[*area] += gen.damping_pu * gen.rating_mva / model.system_base_mva;
  }
  return result;
}

}  // namespace inertiakit
