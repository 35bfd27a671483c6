#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inertiakit/bench/runner.hpp"
#include "inertiakit/estimate.hpp"

namespace inertiakit::bench {

// Every report states where its ground truth comes from: the toolkit's own
// swing-equation model, never externally published system values.
inline constexpr const char* kGroundTruthNote =
    "inertia ground truth is computed from this toolkit's own swing-equation model "
    "(system MVA base); EE/MEE are relative to it";

namespace detail {

inline std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

inline void write_row_tail(std::ostream& os, const AreaReportRow& row) {
  os << "," << csv_field(row.area) << ",";
  if (row.h_true_s) os << csv_number(*row.h_true_s);
  os << ",";
  if (row.h_est_s) os << csv_number(*row.h_est_s);
  os << ",";
  if (row.d_est_pu) os << csv_number(*row.d_est_pu);
  os << ",";
  if (row.ee_pct) os << csv_number(*row.ee_pct);
  os << "," << csv_field(row.status);
}

}  // namespace detail

inline void write_report_csv(std::ostream& os, const std::vector<EstimationReport>& reports) {
  os << "# " << kGroundTruthNote << "\n";
  os << "scenario,method,area,H_true,H_est,D_est,EE_pct,status\n";
  for (const auto& rep : reports)
    for (const auto& row : rep.rows) {
      os << detail::csv_field(rep.scenario_id) << "," << method_name(rep.method);
      detail::write_row_tail(os, row);
      os << "\n";
    }
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "# " << kGroundTruthNote << "\n";
  os << "scenario,method,area,H_true,H_est,D_est,EE_pct,status,param,value\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i)
    for (const auto& row : result.reports[i].rows) {
      os << detail::csv_field(result.reports[i].scenario_id) << ","
         << method_name(result.reports[i].method);
      detail::write_row_tail(os, row);
      os << "," << detail::csv_field(result.parameter) << ","
         << detail::csv_number(result.values[i]) << "\n";
    }
}

inline void write_timevary_csv(std::ostream& os, const std::string& scenario_id,
                               const std::vector<HourOutcome>& hours) {
  os << "# " << kGroundTruthNote << "\n";
  os << "hour,load_scale,scenario,method,area,H_true,H_est,D_est,EE_pct,status\n";
  for (const auto& hour : hours) {
    const std::string prefix = std::to_string(hour.entry.hour) + "," +
                               detail::csv_number(hour.entry.load_scale) + "," +
                               detail::csv_field(scenario_id);
    if (!hour.feasible) {
      os << prefix << ",,,,,," << detail::csv_field("SKIP(" + hour.skip_reason + ")") << "\n";
      continue;
    }
    for (const auto& rep : hour.reports)
      for (const auto& row : rep.rows) {
        os << prefix << "," << method_name(rep.method);
        detail::write_row_tail(os, row);
        os << "\n";
      }
  }
}

inline nlohmann::json report_to_json(const EstimationReport& rep) {
  nlohmann::json areas = nlohmann::json::array();
  for (const auto& row : rep.rows) {
    nlohmann::json r;
    r["area"] = row.area;
    r["h_true_s"] = row.h_true_s ? nlohmann::json(*row.h_true_s) : nlohmann::json();
    r["h_est_s"] = row.h_est_s ? nlohmann::json(*row.h_est_s) : nlohmann::json();
    r["d_est_pu"] = row.d_est_pu ? nlohmann::json(*row.d_est_pu) : nlohmann::json();
    r["ee_pct"] = row.ee_pct ? nlohmann::json(*row.ee_pct) : nlohmann::json();
    r["status"] = row.status;
    areas.push_back(std::move(r));
  }
  nlohmann::json j;
  j["scenario"] = rep.scenario_id;
  j["method"] = method_name(rep.method);
  j["areas"] = std::move(areas);
  j["mee_pct"] = rep.mee_pct ? nlohmann::json(*rep.mee_pct) : nlohmann::json();
  j["complete"] = rep.complete;
  j["hyperparameters"] = rep.hyperparameters;
  return j;
}

inline nlohmann::json reports_to_json(const std::vector<EstimationReport>& reports) {
  nlohmann::json j;
  j["note"] = kGroundTruthNote;
  j["reports"] = nlohmann::json::array();
  for (const auto& rep : reports) j["reports"].push_back(report_to_json(rep));
  return j;
}

inline nlohmann::json sweep_to_json(const SweepResult& result) {
  nlohmann::json j;
  j["note"] = kGroundTruthNote;
  j["param"] = result.parameter;
  j["method"] = method_name(result.method);
  j["points"] = nlohmann::json::array();
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    nlohmann::json point;
    point["value"] = result.values[i];
    point["report"] = report_to_json(result.reports[i]);
    j["points"].push_back(std::move(point));
  }
  return j;
}

inline nlohmann::json timevary_to_json(const std::string& scenario_id,
                                       const std::vector<HourOutcome>& hours) {
  nlohmann::json j;
  j["note"] = kGroundTruthNote;
  j["scenario"] = scenario_id;
  j["hours"] = nlohmann::json::array();
  for (const auto& hour : hours) {
    nlohmann::json h;
    h["hour"] = hour.entry.hour;
    h["load_scale"] = hour.entry.load_scale;
    h["offline_generators"] = hour.entry.offline_generators;
    h["feasible"] = hour.feasible;
    if (!hour.feasible) {
      h["skip_reason"] = hour.skip_reason;
    } else {
      h["truth"] = hour.truth;
      h["reports"] = nlohmann::json::array();
      for (const auto& rep : hour.reports) h["reports"].push_back(report_to_json(rep));
    }
    j["hours"].push_back(std::move(h));
  }
  return j;
}

// Modal diagnostics of a fitted decomposition: eigenvalues, singular-value
// spectrum, amplitude-solve residual, accumulated warnings.
inline nlohmann::json dmd_diagnostics_json(const est::DmdModel& model) {
  nlohmann::json j;
  j["rank"] = model.rank;
  j["dt"] = model.dt;
  j["start_index"] = model.start_index;
  j["residual_at_start"] = model.residual_at_start;
  j["singular_values"] = model.singular_values;
  j["warnings"] = model.warnings;
  auto complex_list = [](const Eigen::VectorXcd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k)
      arr.push_back({{"re", v(k).real()}, {"im", v(k).imag()}});
    return arr;
  };
  j["eigenvalues_continuous"] = complex_list(model.lambda);
  j["eigenvalues_discrete"] = complex_list(model.mu);
  return j;
}

}  // namespace inertiakit::bench
