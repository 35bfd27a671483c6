#pragma once

#include <cmath>
#include <map>
#include <string>

#include "inertiakit/estimate.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::bench {

// Per-area estimation error EE_i = |H̃_i − H_i|/H_i·100% and its maximum
// over areas (MEE). Failed areas appear as FAIL rows, are excluded from the
// maximum, and mark the report incomplete.
inline EstimationReport error_metrics(const std::map<std::string, double>& truth,
                                      const InertiaEstimate& est,
                                      const std::string& scenario_id = "") {
  EstimationReport report;
  report.scenario_id = scenario_id;
  report.method = est.method;
  report.hyperparameters = est.hyperparameters;

  bool any_overlap = false;
  for (const auto& area : est.areas) {
    AreaReportRow row;
    row.area = area.area;
    const auto it = truth.find(area.area);
    if (it != truth.end()) {
      row.h_true_s = it->second;
      any_overlap = true;
    }
    if (area.ok()) {
      if (it == truth.end())
        throw ConfigError("error_metrics: no ground truth for estimated area '" + area.area + "'");
      row.h_est_s = area.inertia_s;
      row.d_est_pu = area.damping_pu;
      row.ee_pct = std::abs(*area.inertia_s - it->second) / it->second * 100.0;
      row.status = "ok";
      if (!report.mee_pct || *row.ee_pct > *report.mee_pct) report.mee_pct = row.ee_pct;
    } else {
      row.status = "FAIL(" + area.failure + ")";
      report.complete = false;
    }
    report.rows.push_back(std::move(row));
  }
  if (!any_overlap)
    throw ConfigError("error_metrics: ground truth and estimate share no areas");
  return report;
}

}  // namespace inertiakit::bench
