#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inertiakit/bench/metrics.hpp"
#include "inertiakit/bench/scenario.hpp"
#include "inertiakit/sim/simulate.hpp"

namespace inertiakit::bench {

// Everything one scenario run produces, kept so callers can persist any
// intermediate stage.
struct ScenarioArtifacts {
  sim::SimulationResult simulation;
  AreaDataset raw_dataset;   // straight from the simulator
  AreaDataset dataset;       // after noise/filter conditioning
  std::map<std::string, double> truth;  // area → H on the system base
  std::vector<InertiaEstimate> estimates;
  std::vector<EstimationReport> reports;
  std::optional<est::DmdModel> dmd_model;  // diagnostics, present when dmd ran
};

// simulate → extract area dataset → condition → run every enabled
// estimator → error metrics against the model's own ground truth.
inline ScenarioArtifacts run_scenario(const ScenarioConfig& cfg) {
  check_scenario(cfg);
  ScenarioArtifacts art;
  try {
    art.simulation =
        sim::simulate(cfg.model, cfg.disturbance, cfg.duration_s, cfg.measurement_rate_hz);
  } catch (const SimulationError& e) {
    throw SimulationError("scenario '" + cfg.id + "': " + e.what());
  }
  art.raw_dataset = sim::extract_area_dataset(art.simulation, cfg.model);
  art.dataset = condition_dataset(art.raw_dataset, cfg.noise, cfg.filter);
  art.truth = true_area_inertia(cfg.model);

  auto add = [&](InertiaEstimate est) {
    art.reports.push_back(error_metrics(art.truth, est, cfg.id));
    art.estimates.push_back(std::move(est));
  };
  if (cfg.sysid_enabled) add(est::estimate_sysid(art.dataset, cfg.sysid));
  if (cfg.dmd_enabled) {
    est::DmdModel model;
    // use the snapped disturbance times recorded by the simulator
    add(est::estimate_dmd(art.dataset, art.simulation.disturbance, cfg.dmd, &model));
    art.dmd_model = std::move(model);
  }
  if (cfg.osc_enabled) add(est::estimate_osc(art.dataset, cfg.osc));
  return art;
}

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  Method method = Method::SysId;
  std::vector<EstimationReport> reports;  // one per value, row count = value count
};

namespace detail {

inline int to_integer(const std::string& parameter, double v, int minimum) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < minimum)
    throw ConfigError("sweep: " + parameter + " values must be integers >= " +
                      std::to_string(minimum));
  return static_cast<int>(r);
}

// Report used when an estimator rejects a sweep value outright (for
// example a start index beyond the record): every area gets a FAIL row so
// the table still distinguishes "no estimate" from "huge error".
inline EstimationReport all_failed_report(const std::string& scenario_id, Method method,
                                          const AreaDataset& ds, const std::string& reason) {
  EstimationReport rep;
  rep.scenario_id = scenario_id;
  rep.method = method;
  rep.complete = false;
  for (const auto& area : ds.area_ids) {
    AreaReportRow row;
    row.area = area;
    row.status = "FAIL(" + reason + ")";
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace detail

// One estimator run per parameter value over a single shared simulation.
inline SweepResult sweep(const ScenarioConfig& cfg, const std::string& parameter,
                         const std::vector<double>& values) {
  ScenarioConfig base = cfg;
  base.sweep = SweepSpec{parameter, values};
  check_scenario(base);  // validates parameter name, owner enabled, values nonempty

  sim::SimulationResult simulation;
  try {
    simulation = sim::simulate(cfg.model, cfg.disturbance, cfg.duration_s, cfg.measurement_rate_hz);
  } catch (const SimulationError& e) {
    throw SimulationError("scenario '" + cfg.id + "': " + e.what());
  }
  const AreaDataset dataset =
      condition_dataset(sim::extract_area_dataset(simulation, cfg.model), cfg.noise, cfg.filter);
  const std::map<std::string, double> truth = true_area_inertia(cfg.model);

  SweepResult result;
  result.parameter = parameter;
  result.values = values;
  result.method = parameter == kSweepSysIdPolyOrder
                      ? Method::SysId
                      : (parameter == kSweepDmdStartIndex ? Method::Dmd : Method::Osc);

  for (const double v : values) {
    try {
      InertiaEstimate est;
      if (parameter == kSweepSysIdPolyOrder) {
        est::SysIdConfig c = cfg.sysid;
        c.poly_order = detail::to_integer(parameter, v, 1);
        est = est::estimate_sysid(dataset, c);
      } else if (parameter == kSweepDmdStartIndex) {
        est::DmdConfig c = cfg.dmd;
        c.start_index = detail::to_integer(parameter, v, 0);
        est = est::estimate_dmd(dataset, simulation.disturbance, c);
      } else {
        est::OscillationConfig c = cfg.osc;
        c.bandwidth_hz = v;
        est = est::estimate_osc(dataset, c);
      }
      result.reports.push_back(error_metrics(truth, est, cfg.id));
    } catch (const Error& e) {
      result.reports.push_back(
          detail::all_failed_report(cfg.id, result.method, dataset, e.what()));
    }
  }
  return result;
}

struct HourOutcome {
  ProfileEntry entry;
  bool feasible = true;
  std::string skip_reason;
  std::map<std::string, double> truth;
  std::vector<EstimationReport> reports;
};

// Re-run the scenario under each profile entry: loads scaled, listed
// generators decommitted (changing the true area inertias). Hours whose
// equilibrium cannot be established are skipped with a record.
inline std::vector<HourOutcome> timevarying_study(const ScenarioConfig& cfg,
                                                  const std::vector<ProfileEntry>& hours) {
  check_scenario(cfg);
  std::vector<HourOutcome> out;
  for (const auto& entry : hours) {
    HourOutcome outcome;
    outcome.entry = entry;

    ScenarioConfig hour_cfg = cfg;
    for (auto& load : hour_cfg.model.loads) load.active_power_pu *= entry.load_scale;
    for (const auto& gen_id : entry.offline_generators) {
      auto& gens = hour_cfg.model.generators;
      const auto it = std::find_if(gens.begin(), gens.end(),
                                   [&](const Generator& g) { return g.id == gen_id; });
      if (it == gens.end())
        throw ConfigError("profile: unknown generator '" + gen_id + "' in offline list");
      gens.erase(it);
    }

    try {
      if (hour_cfg.model.generators.empty())
        throw ConfigError("no generators remain committed");
      ScenarioArtifacts art = run_scenario(hour_cfg);
      outcome.truth = std::move(art.truth);
      outcome.reports = std::move(art.reports);
    } catch (const Error& e) {
      outcome.feasible = false;
      outcome.skip_reason = e.what();
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

}  // namespace inertiakit::bench
