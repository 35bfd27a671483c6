#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inertiakit/bench/scenario.hpp"
#include "inertiakit/grid.hpp"
#include "inertiakit/types.hpp"

namespace inertiakit::io {

inline constexpr int kSchemaVersion = 1;

namespace detail {

using nlohmann::json;

inline const json& member(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ctx + ": missing required key '" + std::string(key) + "'");
  return *it;
}

inline double number_at(const json& j, const char* key, const std::string& ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_number()) throw ConfigError(ctx + ": '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  return number_at(j, key, ctx);
}

inline int integer_or(const json& j, const char* key, int fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(ctx + ": '" + std::string(key) + "' must be an integer");
  return v.get<int>();
}

inline std::string string_at(const json& j, const char* key, const std::string& ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_string()) throw ConfigError(ctx + ": '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

inline bool bool_or(const json& j, const char* key, bool fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(ctx + ": '" + std::string(key) + "' must be a boolean");
  return v.get<bool>();
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': invalid JSON: " + e.what());
  }
}

inline void require_schema(const json& j, const std::string& ctx) {
  const json& v = member(j, "schema_version", ctx);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw ConfigError(ctx + ": unsupported schema_version (expected " +
                      std::to_string(kSchemaVersion) + ")");
}

}  // namespace detail

inline GridModel grid_from_json(const nlohmann::json& j) {
  using detail::member;
  const std::string ctx = "grid";
  GridModel model;
  model.system_base_mva = detail::number_or(j, "system_base_mva", 100.0, ctx);
  model.nominal_frequency_hz = detail::number_or(j, "nominal_frequency_hz", 60.0, ctx);

  const auto& buses = member(j, "buses", ctx);
  if (!buses.is_array()) throw ConfigError(ctx + ": 'buses' must be an array");
  for (const auto& b : buses) {
    Bus bus;
    bus.id = detail::string_at(b, "id", ctx + ".buses[]");
    bus.nominal_kv = detail::number_or(b, "nominal_kv", 1.0, ctx + ".buses[]");
    model.buses.push_back(std::move(bus));
  }

  const auto& gens = member(j, "generators", ctx);
  if (!gens.is_array()) throw ConfigError(ctx + ": 'generators' must be an array");
  for (const auto& g : gens) {
    const std::string gctx = ctx + ".generators[]";
    Generator gen;
    gen.id = detail::string_at(g, "id", gctx);
    gen.bus = detail::string_at(g, "bus", gctx);
    gen.rating_mva = detail::number_at(g, "rating_mva", gctx);
    gen.inertia_s = detail::number_at(g, "inertia_s", gctx);
    gen.damping_pu = detail::number_or(g, "damping_pu", 0.0, gctx);
    gen.xd_transient_pu = detail::number_at(g, "xd_transient_pu", gctx);
    gen.mech_power_pu = detail::number_or(g, "mech_power_pu", 0.0, gctx);
    model.generators.push_back(std::move(gen));
  }

  const auto& lines = member(j, "lines", ctx);
  if (!lines.is_array()) throw ConfigError(ctx + ": 'lines' must be an array");
  for (const auto& l : lines) {
    Line line;
    line.from = detail::string_at(l, "from", ctx + ".lines[]");
    line.to = detail::string_at(l, "to", ctx + ".lines[]");
    line.reactance_pu = detail::number_at(l, "reactance_pu", ctx + ".lines[]");
    model.lines.push_back(std::move(line));
  }

  if (j.contains("loads")) {
    const auto& loads = j.at("loads");
    if (!loads.is_array()) throw ConfigError(ctx + ": 'loads' must be an array");
    for (const auto& l : loads) {
      Load load;
      load.bus = detail::string_at(l, "bus", ctx + ".loads[]");
      load.active_power_pu = detail::number_at(l, "active_power_pu", ctx + ".loads[]");
      model.loads.push_back(std::move(load));
    }
  }

  const auto& areas = member(j, "areas", ctx);
  if (!areas.is_object()) throw ConfigError(ctx + ": 'areas' must map bus ids to area labels");
  for (auto it = areas.begin(); it != areas.end(); ++it) {
    if (!it.value().is_string())
      throw ConfigError(ctx + ": area label for bus '" + it.key() + "' must be a string");
    model.areas[it.key()] = it.value().get<std::string>();
  }
  return model;
}

inline nlohmann::json grid_to_json(const GridModel& model) {
  nlohmann::json j;
  j["system_base_mva"] = model.system_base_mva;
  j["nominal_frequency_hz"] = model.nominal_frequency_hz;
  j["buses"] = nlohmann::json::array();
  for (const auto& b : model.buses)
    j["buses"].push_back({{"id", b.id}, {"nominal_kv", b.nominal_kv}});
  j["generators"] = nlohmann::json::array();
  for (const auto& g : model.generators)
    j["generators"].push_back({{"id", g.id},
                               {"bus", g.bus},
                               {"rating_mva", g.rating_mva},
                               {"inertia_s", g.inertia_s},
                               {"damping_pu", g.damping_pu},
                               {"xd_transient_pu", g.xd_transient_pu},
                               {"mech_power_pu", g.mech_power_pu}});
  j["lines"] = nlohmann::json::array();
  for (const auto& l : model.lines)
    j["lines"].push_back({{"from", l.from}, {"to", l.to}, {"reactance_pu", l.reactance_pu}});
  j["loads"] = nlohmann::json::array();
  for (const auto& l : model.loads)
    j["loads"].push_back({{"bus", l.bus}, {"active_power_pu", l.active_power_pu}});
  j["areas"] = model.areas;
  return j;
}

inline DisturbanceSpec disturbance_from_json(const nlohmann::json& j) {
  const std::string ctx = "disturbance";
  DisturbanceSpec d;
  const std::string kind = detail::string_at(j, "kind", ctx);
  if (kind == "load_step") {
    d.kind = DisturbanceKind::LoadStep;
  } else if (kind == "bus_fault") {
    d.kind = DisturbanceKind::BusFault;
  } else {
    throw ConfigError(ctx + ": kind must be 'load_step' or 'bus_fault'");
  }
  d.bus = detail::string_at(j, "bus", ctx);
  d.t_start_s = detail::number_or(j, "t_start_s", 1.0, ctx);
  if (d.kind == DisturbanceKind::BusFault) {
    // A fault without an explicit shunt strength gets the stiff default.
    d.magnitude = detail::number_or(j, "magnitude", 1e4, ctx);
    d.t_clear_s = detail::number_at(j, "t_clear_s", ctx);
  } else {
    d.magnitude = detail::number_at(j, "magnitude", ctx);
    if (j.contains("t_clear_s"))
      throw ConfigError(ctx + ": t_clear_s applies only to bus faults");
  }
  check_disturbance(d);
  return d;
}

inline bench::ScenarioConfig scenario_from_json(const nlohmann::json& j,
                                                const std::string& fallback_id) {
  detail::require_schema(j, "scenario");
  bench::ScenarioConfig cfg;
  cfg.id = j.contains("id") ? detail::string_at(j, "id", "scenario") : fallback_id;
  cfg.model = grid_from_json(detail::member(j, "grid", "scenario"));
  cfg.disturbance = disturbance_from_json(detail::member(j, "disturbance", "scenario"));

  if (j.contains("simulation")) {
    const auto& sim = j.at("simulation");
    cfg.duration_s = detail::number_or(sim, "duration_s", cfg.duration_s, "simulation");
    cfg.measurement_rate_hz =
        detail::number_or(sim, "measurement_rate_hz", cfg.measurement_rate_hz, "simulation");
  }

  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    NoiseSpec noise;
    noise.sigma = detail::number_at(n, "sigma", "noise");
    if (n.contains("seed")) {
      const auto& s = n.at("seed");
      if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
        throw ConfigError("noise: 'seed' must be a non-negative integer");
      noise.seed = s.get<std::uint64_t>();
    }
    check_noise(noise);
    cfg.noise = noise;
  }

  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    FilterSpec filter;
    filter.cutoff_hz = detail::number_or(f, "cutoff_hz", filter.cutoff_hz, "filter");
    filter.order = detail::integer_or(f, "order", filter.order, "filter");
    check_filter(filter);
    cfg.filter = filter;
  }

  if (j.contains("estimators")) {
    const auto& est = j.at("estimators");
    if (!est.is_object()) throw ConfigError("scenario: 'estimators' must be an object");
    if (est.contains("sysid")) {
      const auto& s = est.at("sysid");
      cfg.sysid_enabled = detail::bool_or(s, "enabled", true, "estimators.sysid");
      cfg.sysid.order = detail::integer_or(s, "order", cfg.sysid.order, "estimators.sysid");
      cfg.sysid.poly_order =
          detail::integer_or(s, "poly_order", cfg.sysid.poly_order, "estimators.sysid");
      cfg.sysid.fit_window_s =
          detail::number_or(s, "fit_window_s", cfg.sysid.fit_window_s, "estimators.sysid");
    }
    if (est.contains("dmd")) {
      const auto& d = est.at("dmd");
      cfg.dmd_enabled = detail::bool_or(d, "enabled", true, "estimators.dmd");
      cfg.dmd.rank = detail::integer_or(d, "rank", cfg.dmd.rank, "estimators.dmd");
      cfg.dmd.start_index =
          detail::integer_or(d, "start_index", cfg.dmd.start_index, "estimators.dmd");
      cfg.dmd.anchor_at_clear =
          detail::bool_or(d, "anchor_at_clear", cfg.dmd.anchor_at_clear, "estimators.dmd");
    }
    if (est.contains("osc")) {
      const auto& o = est.at("osc");
      cfg.osc_enabled = detail::bool_or(o, "enabled", true, "estimators.osc");
      cfg.osc.bandwidth_hz =
          detail::number_or(o, "bandwidth_hz", cfg.osc.bandwidth_hz, "estimators.osc");
      cfg.osc.include_dc = detail::bool_or(o, "include_dc", cfg.osc.include_dc, "estimators.osc");
    }
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    bench::SweepSpec sweep;
    sweep.parameter = detail::string_at(s, "parameter", "sweep");
    const auto& values = detail::member(s, "values", "sweep");
    if (!values.is_array()) throw ConfigError("sweep: 'values' must be an array");
    for (const auto& v : values) {
      if (!v.is_number()) throw ConfigError("sweep: values must be numbers");
      sweep.values.push_back(v.get<double>());
    }
    cfg.sweep = std::move(sweep);
  }

  bench::check_scenario(cfg);
  return cfg;
}

inline bench::ScenarioConfig load_scenario_file(const std::string& path) {
  const nlohmann::json j = detail::parse_file(path);
  return scenario_from_json(j, std::filesystem::path(path).stem().string());
}

inline std::vector<bench::ProfileEntry> profile_from_json(const nlohmann::json& j) {
  detail::require_schema(j, "profile");
  const auto& hours = detail::member(j, "hours", "profile");
  if (!hours.is_array() || hours.empty())
    throw ConfigError("profile: 'hours' must be a non-empty array");
  std::vector<bench::ProfileEntry> entries;
  for (const auto& h : hours) {
    bench::ProfileEntry entry;
    entry.hour = detail::integer_or(h, "hour", static_cast<int>(entries.size()), "profile.hours[]");
    entry.load_scale = detail::number_at(h, "load_scale", "profile.hours[]");
    if (!(entry.load_scale > 0.0))
      throw ConfigError("profile: load_scale must be positive");
    if (h.contains("offline_generators")) {
      const auto& off = h.at("offline_generators");
      if (!off.is_array()) throw ConfigError("profile: 'offline_generators' must be an array");
      for (const auto& g : off) {
        if (!g.is_string()) throw ConfigError("profile: offline generator ids must be strings");
        entry.offline_generators.push_back(g.get<std::string>());
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

inline std::vector<bench::ProfileEntry> load_profile_file(const std::string& path) {
  return profile_from_json(detail::parse_file(path));
}

}  // namespace inertiakit::io
