#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inertiakit/inertiakit.hpp"

namespace {

using namespace inertiakit;

void apply_seed_override(bench::ScenarioConfig& cfg, bool seed_given, std::uint64_t seed) {
  if (!seed_given) return;
  if (cfg.noise)
    cfg.noise->seed = seed;
  else
    std::cerr << "note: --seed has no effect, scenario has no noise block\n";
}

std::filesystem::path prepare_out(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  std::cout << "wrote " << path.string() << "\n";
}

bool any_successful_row(const std::vector<EstimationReport>& reports) {
  for (const auto& rep : reports)
    for (const auto& row : rep.rows)
      if (row.status == "ok") return true;
  return false;
}

void print_report_summary(const EstimationReport& rep) {
  std::cout << "  " << method_name(rep.method) << ": ";
  if (rep.mee_pct)
    std::cout << "MEE " << *rep.mee_pct << "%";
  else
    std::cout << "MEE n/a";
  if (!rep.complete) {
    std::cout << " [incomplete:";
    for (const auto& row : rep.rows)
      if (row.status != "ok") std::cout << " " << row.area;
    std::cout << "]";
  }
  std::cout << "\n";
}

nlohmann::json simulation_to_json(const sim::SimulationResult& result) {
  nlohmann::json j;
  j["time"] = result.time;
  j["measurement_rate_hz"] = result.measurement_rate_hz;
  j["nominal_frequency_hz"] = result.nominal_frequency_hz;
  j["internal_step_s"] = result.internal_step_s;
  j["generators"] = nlohmann::json::array();
  for (std::size_t m = 0; m < result.gen_ids.size(); ++m)
    j["generators"].push_back({{"id", result.gen_ids[m]},
                               {"domega_pu", result.domega[m]},
                               {"delta_rad", result.delta[m]}});
  j["areas"] = nlohmann::json::array();
  for (std::size_t a = 0; a < result.area_ids.size(); ++a)
    j["areas"].push_back({{"id", result.area_ids[a]}, {"pe_export_pu", result.area_pe[a]}});
  return j;
}

int cmd_simulate(const std::string& file, const std::string& out_dir, const std::string& format,
                 bool seed_given, std::uint64_t seed) {
  auto cfg = io::load_scenario_file(file);
  apply_seed_override(cfg, seed_given, seed);
  const auto result = sim::simulate(cfg.model, cfg.disturbance, cfg.duration_s,
                                    cfg.measurement_rate_hz);
  std::cout << "scenario '" << cfg.id << "': " << result.sample_count() << " samples at "
            << result.measurement_rate_hz << " Hz, internal step " << result.internal_step_s
            << " s\n";
  const auto dir = prepare_out(out_dir);
  if (format == "json") {
    write_text_file(dir / (cfg.id + "_sim.json"), simulation_to_json(result).dump(2) + "\n");
  } else {
    std::ostringstream os;
    sim::export_csv(result, os);
    write_text_file(dir / (cfg.id + "_sim.csv"), os.str());
  }
  return 0;
}

int cmd_estimate(const std::string& file, const std::string& method, const std::string& out_dir,
                 const std::string& format, bool seed_given, std::uint64_t seed) {
  auto cfg = io::load_scenario_file(file);
  apply_seed_override(cfg, seed_given, seed);
  if (method != "all") {
    cfg.sysid_enabled = method == "sysid";
    cfg.dmd_enabled = method == "dmd";
    cfg.osc_enabled = method == "osc";
    cfg.sweep.reset();  // a sweep spec may reference a now-disabled estimator
  }
  const auto art = bench::run_scenario(cfg);
  std::cout << "scenario '" << cfg.id << "': " << art.dataset.n_areas() << " area(s), "
            << art.reports.size() << " method(s)\n";
  for (const auto& rep : art.reports) print_report_summary(rep);

  const auto dir = prepare_out(out_dir);
  if (format == "json") {
    write_text_file(dir / (cfg.id + "_report.json"),
                    bench::reports_to_json(art.reports).dump(2) + "\n");
  } else {
    std::ostringstream os;
    bench::write_report_csv(os, art.reports);
    write_text_file(dir / (cfg.id + "_report.csv"), os.str());
  }
  if (art.dmd_model)
    write_text_file(dir / (cfg.id + "_dmd_diagnostics.json"),
                    bench::dmd_diagnostics_json(*art.dmd_model).dump(2) + "\n");
  return any_successful_row(art.reports) ? 0 : 3;
}

int cmd_sweep(const std::string& file, std::string parameter, std::vector<double> values,
              const std::string& out_dir, const std::string& format, bool seed_given,
              std::uint64_t seed) {
  auto cfg = io::load_scenario_file(file);
  apply_seed_override(cfg, seed_given, seed);
  if (parameter.empty() && cfg.sweep) parameter = cfg.sweep->parameter;
  if (values.empty() && cfg.sweep) values = cfg.sweep->values;
  if (parameter.empty() || values.empty())
    throw ConfigError("sweep: --param and --values are required (or a 'sweep' block in the file)");

  const auto result = bench::sweep(cfg, parameter, values);
  std::cout << "sweep '" << parameter << "' over " << values.size() << " value(s), method "
            << method_name(result.method) << "\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    std::cout << "  " << parameter << "=" << result.values[i];
    if (result.reports[i].mee_pct)
      std::cout << "  MEE " << *result.reports[i].mee_pct << "%";
    else
      std::cout << "  MEE n/a";
    std::cout << (result.reports[i].complete ? "" : "  [incomplete]") << "\n";
  }

  std::string stem = cfg.id + "_sweep_" + parameter;
  for (char& c : stem)
    if (c == '.') c = '_';
  const auto dir = prepare_out(out_dir);
  if (format == "json") {
    write_text_file(dir / (stem + ".json"), bench::sweep_to_json(result).dump(2) + "\n");
  } else {
    std::ostringstream os;
    bench::write_sweep_csv(os, result);
    write_text_file(dir / (stem + ".csv"), os.str());
  }
  return any_successful_row(result.reports) ? 0 : 3;
}

int cmd_timevary(const std::string& file, const std::string& profile, const std::string& out_dir,
                 const std::string& format, bool seed_given, std::uint64_t seed) {
  auto cfg = io::load_scenario_file(file);
  apply_seed_override(cfg, seed_given, seed);
  const auto hours = io::load_profile_file(profile);
  const auto outcomes = bench::timevarying_study(cfg, hours);

  bool any_ok = false;
  int skipped = 0;
  for (const auto& hour : outcomes) {
    if (!hour.feasible) {
      ++skipped;
      std::cout << "  hour " << hour.entry.hour << ": SKIP(" << hour.skip_reason << ")\n";
      continue;
    }
    std::cout << "  hour " << hour.entry.hour << ":";
    for (const auto& rep : hour.reports) {
      std::cout << " " << method_name(rep.method) << "=";
      if (rep.mee_pct)
        std::cout << *rep.mee_pct << "%";
      else
        std::cout << "n/a";
      any_ok = any_ok || any_successful_row({rep});
    }
    std::cout << "\n";
  }
  std::cout << outcomes.size() << " hour(s), " << skipped << " skipped\n";

  const auto dir = prepare_out(out_dir);
  if (format == "json") {
    write_text_file(dir / (cfg.id + "_timevary.json"),
                    bench::timevary_to_json(cfg.id, outcomes).dump(2) + "\n");
  } else {
    std::ostringstream os;
    bench::write_timevary_csv(os, cfg.id, outcomes);
    write_text_file(dir / (cfg.id + "_timevary.csv"), os.str());
  }
  return any_ok ? 0 : 3;
}

int cmd_validate(const std::string& file) {
  const nlohmann::json j = io::detail::parse_file(file);
  const bool is_scenario = j.contains("grid");
  const GridModel model = io::grid_from_json(is_scenario ? j.at("grid") : j);
  const auto issues = validate(model);
  int errors = 0;
  for (const auto& issue : issues) {
    const bool is_error = issue.severity == ValidationIssue::Severity::Error;
    errors += is_error ? 1 : 0;
    std::cout << (is_error ? "error: " : "warning: ") << issue.message << "\n";
  }
  if (errors > 0) {
    std::cout << "invalid model: " << errors << " error(s)\n";
    return 1;
  }
  if (is_scenario) {
    // Full parse checks the disturbance, estimator settings, and sweep block.
    io::load_scenario_file(file);
  }
  std::cout << "model OK (" << issues.size() << " warning(s))\n";
  for (const auto& [area, h] : true_area_inertia(model))
    std::cout << "  area " << area << ": H = " << h << " s (system base)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"area inertia estimation toolkit: swing-equation simulation and "
               "measurement-driven estimators"};
  app.require_subcommand(1);

  std::string out_dir = "./out";
  std::string format = "csv";
  std::uint64_t seed = 0;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "override the scenario noise seed");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::string sim_file;
  auto* sim_cmd = app.add_subcommand("simulate", "run the swing-equation simulator");
  sim_cmd->fallthrough();
  sim_cmd->add_option("scenario", sim_file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string est_file;
  std::string method = "all";
  auto* est_cmd = app.add_subcommand("estimate", "simulate, then estimate area inertia");
  est_cmd->fallthrough();
  est_cmd->add_option("scenario", est_file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  est_cmd->add_option("--method", method, "estimator to run")
      ->check(CLI::IsMember({"sysid", "dmd", "osc", "all"}))
      ->capture_default_str();

  std::string sweep_file;
  std::string sweep_param;
  std::vector<double> sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "hyperparameter sensitivity sweep");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("scenario", sweep_file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--param", sweep_param,
                        "sweep parameter: sysid.N_p | dmd.start_index | osc.bandwidth_B");
  sweep_cmd->add_option("--values", sweep_values, "sweep values")->delimiter(',');

  std::string tv_file;
  std::string tv_profile;
  auto* tv_cmd = app.add_subcommand("timevary", "24-hour commitment/load profile study");
  tv_cmd->fallthrough();
  tv_cmd->add_option("scenario", tv_file, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  tv_cmd->add_option("--profile", tv_profile, "profile JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string val_file;
  auto* val_cmd = app.add_subcommand("validate", "validate a model or scenario file");
  val_cmd->fallthrough();
  val_cmd->add_option("file", val_file, "model or scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const bool seed_given = app.count("--seed") > 0;

  try {
    if (*sim_cmd) return cmd_simulate(sim_file, out_dir, format, seed_given, seed);
    if (*est_cmd) return cmd_estimate(est_file, method, out_dir, format, seed_given, seed);
    if (*sweep_cmd)
      return cmd_sweep(sweep_file, sweep_param, sweep_values, out_dir, format, seed_given, seed);
    if (*tv_cmd) return cmd_timevary(tv_file, tv_profile, out_dir, format, seed_given, seed);
    if (*val_cmd) return cmd_validate(val_file);
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
