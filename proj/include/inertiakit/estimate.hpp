#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inertiakit/types.hpp"

namespace inertiakit {

enum class Method { SysId, Dmd, Osc };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::SysId: return "sysid";
    case Method::Dmd: return "dmd";
    case Method::Osc: return "osc";
  }
  return "?";
}

// One area's outcome: either an inertia value (seconds, system MVA base) with
// optional damping, or a failure reason. Non-positive inertia values are
// never reported as valid.
struct AreaEstimate {
  std::string area;
  std::optional<double> inertia_s;
  std::optional<double> damping_pu;
  std::string failure;  // empty on success
  std::map<std::string, double> diagnostics;

  bool ok() const { return failure.empty() && inertia_s.has_value(); }
};

struct InertiaEstimate {
  Method method = Method::SysId;
  std::vector<AreaEstimate> areas;
  std::map<std::string, double> hyperparameters;

  const AreaEstimate* find(const std::string& area) const {
    for (const auto& a : areas)
      if (a.area == area) return &a;
    return nullptr;
  }
};

// Mark an area as failed, enforcing the no-silent-nonpositive-inertia rule.
inline AreaEstimate failed_area(std::string area, std::string reason) {
  AreaEstimate a;
  a.area = std::move(area);
  a.failure = std::move(reason);
  return a;
}

struct AreaReportRow {
  std::string area;
  std::optional<double> h_true_s;
  std::optional<double> h_est_s;
  std::optional<double> d_est_pu;
  std::optional<double> ee_pct;
  std::string status;  // "ok" or "FAIL(reason)"
};

// Per-area estimation errors and their maximum, for one method on one
// scenario. `complete` is false when any area failed; failed areas are
// excluded from the maximum.
struct EstimationReport {
  std::string scenario_id;
  Method method = Method::SysId;
  std::vector<AreaReportRow> rows;
  std::optional<double> mee_pct;
  bool complete = true;
  std::map<std::string, double> hyperparameters;
};

}  // namespace inertiakit
