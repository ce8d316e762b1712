// Command-line front end: run experiments, analyze logs, validate configs.
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "reciprosim/config.hpp"
#include "reciprosim/engine.hpp"
#include "reciprosim/error.hpp"
#include "reciprosim/experiment.hpp"
#include "reciprosim/replay.hpp"

namespace {

constexpr const char* kVersion = "reciprosim 1.0.0 (log format v1)";

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Sibling config artifact: "<stem>.log" -> "<stem>.config".
std::string sibling_config(const std::string& log_path) {
  std::string stem = log_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".log")
    stem.resize(stem.size() - 4);
  return stem + ".config";
}

reciprosim::DetectorParams load_params_file(const std::string& path,
                                            bool& nu_explicit) {
  reciprosim::ConfigFile file =
      reciprosim::parse_config_text([&path] {
        std::ifstream in(path, std::ios::binary);
        if (!in) reciprosim::fail(reciprosim::Err::IoError, "cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
      }());
  for (const auto& [name, _] : file.sections)
    if (name != "detector")
      reciprosim::fail(reciprosim::Err::ConfigInvalid,
                       "params file may only contain [detector]");
  reciprosim::DetectorParams params;
  auto it = file.sections.find("detector");
  if (it == file.sections.end()) return params;
  for (const auto& [key, val] : it->second) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(val.first.data(),
                                   val.first.data() + val.first.size(), v);
    if (ec != std::errc() || p != val.first.data() + val.first.size())
      reciprosim::fail(reciprosim::Err::ParseError,
                       "detector key '" + key + "': bad value '" + val.first + "'");
    if (key == "delta") params.credit.delta = static_cast<reciprosim::Amount>(v);
    else if (key == "epsilon") params.credit.epsilon = static_cast<reciprosim::Amount>(v);
    else if (key == "window") params.credit.window = v;
    else if (key == "min_duration") params.credit.min_duration = v;
    else if (key == "need_threshold") {
      params.need_threshold = static_cast<reciprosim::Amount>(v);
      nu_explicit = true;
    } else {
      reciprosim::fail(reciprosim::Err::ConfigInvalid, "unknown detector key '" + key + "'");
    }
  }
  if (params.credit.delta <= params.credit.epsilon)
    reciprosim::fail(reciprosim::Err::ConfigInvalid, "detector needs delta > epsilon");
  return params;
}

int cmd_run(const std::string& config_path, const std::string& out_flag,
            const std::string& seeds_flag, unsigned jobs) {
  reciprosim::ExperimentSpec spec;
  try {
    spec = reciprosim::load_experiment_file(config_path);
    if (!seeds_flag.empty()) {
      // Reuse the config grammar for the override so both forms stay in sync.
      reciprosim::ExperimentSpec probe = reciprosim::load_experiment_text(
          "[experiment]\nscenario = TRADE\nseeds = " + seeds_flag + "\n");
      spec.seeds = probe.seeds;
    }
  } catch (const reciprosim::SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  if (!out_flag.empty()) {
    spec.out_dir = out_flag;
  } else if (spec.out_dir.empty()) {
    const char* env = std::getenv("RECIPROSIM_OUT");
    spec.out_dir = env ? env : ".";
  }
  try {
    reciprosim::ExperimentResult result = reciprosim::run_experiment(spec, jobs);
    std::cout << "wrote " << result.runs.size() << " runs to " << spec.out_dir << "\n";
    for (const reciprosim::RunArtifacts& art : result.runs)
      std::cout << "  " << art.log_path << "\n";
    std::cout << "aggregate: " << result.aggregate_csv_path << "\n";
    std::cout << "comparisons: " << result.comparisons_csv_path << "\n";
    std::cout << "manifest: " << result.manifest_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_analyze(const std::string& log_path, const std::string& control_path,
                const std::string& params_path, const std::string& config_flag) {
  reciprosim::DetectorParams params;
  bool nu_explicit = false;
  reciprosim::ScenarioConfig cfg;
  try {
    if (!params_path.empty()) params = load_params_file(params_path, nu_explicit);
    const std::string cfg_path =
        config_flag.empty() ? sibling_config(log_path) : config_flag;
    cfg = reciprosim::load_scenario_file(cfg_path);
  } catch (const reciprosim::SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  if (!nu_explicit) params.need_threshold = cfg.policy.need_threshold;
  try {
    reciprosim::EventLog log = reciprosim::load_log(log_path);
    std::optional<reciprosim::EventLog> control_log;
    std::optional<reciprosim::ScenarioConfig> control_cfg;
    if (!control_path.empty()) {
      control_log = reciprosim::load_log(control_path);
      control_cfg = reciprosim::load_scenario_file(sibling_config(control_path));
    }
    reciprosim::MacrostateReport report = reciprosim::summarize(
        log, cfg, params, control_log ? &*control_log : nullptr,
        control_cfg ? &*control_cfg : nullptr);
    std::cout << reciprosim::report_text(report);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  try {
    reciprosim::ExperimentSpec spec = reciprosim::load_experiment_file(config_path);
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(reciprosim::config_digest(spec.scenario)));
    std::cout << "ok: " << reciprosim::scenario_name(spec.scenario.kind) << " config "
              << digest << ", " << spec.seeds.size() << " seed(s)\n";
  } catch (const reciprosim::SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic reciprocity simulator and macrostate detectors"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seeds, log_path, control_path, params_path, cfg_flag;
  unsigned jobs = 1;

  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "experiment config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (default $RECIPROSIM_OUT or .)");
  run_cmd->add_option("--seeds", seeds, "override seeds: A..B or comma list");
  run_cmd->add_option("--jobs", jobs, "parallel seed workers")->check(CLI::Range(1u, 256u));

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "summarize a log file");
  analyze_cmd->add_option("log", log_path, "event log")->required();
  analyze_cmd->add_option("--control", control_path, "paired control log");
  analyze_cmd->add_option("--params", params_path, "detector params file ([detector] section)");
  analyze_cmd->add_option("--config", cfg_flag, "scenario config artifact (default: sibling .config)");

  CLI::App* validate_cmd = app.add_subcommand("validate", "check an experiment config");
  validate_cmd->add_option("config", config_path, "experiment config file")->required();

  CLI::App* version_cmd = app.add_subcommand("version", "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (version_cmd->parsed()) {
    std::cout << kVersion << "\n";
    return 0;
  }
  if (run_cmd->parsed()) return cmd_run(config_path, out_dir, seeds, jobs);
  if (analyze_cmd->parsed()) return cmd_analyze(log_path, control_path, params_path, cfg_flag);
  if (validate_cmd->parsed()) return cmd_validate(config_path);
  return kExitUsage;
}
