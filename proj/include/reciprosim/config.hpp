#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reciprosim/detectors.hpp"
#include "reciprosim/scenario.hpp"

namespace reciprosim {

// Flat config grammar:
//   - '#' starts a comment (whole line or trailing),
//   - '[name]' opens a section,
//   - 'key = value' assigns within the current section,
//   - blank lines ignored; keys are [a-z0-9_]+; duplicate keys rejected.
// Sections: [experiment] (scenario, seeds, controls, out), [scenario]
// (overrides for make_scenario), [detector] (delta, epsilon, window,
// min_duration, need_threshold).
struct ConfigFile {
  // section -> key -> (value, line number)
  std::map<std::string, std::map<std::string, std::pair<std::string, std::size_t>>> sections;
};

ConfigFile parse_config_text(const std::string& text);

struct ExperimentSpec {
  ScenarioConfig scenario;
  std::vector<std::uint64_t> seeds;    // "A..B" (inclusive) or comma list
  std::vector<std::string> controls;   // switch names
  DetectorParams detectors;
  std::string out_dir;                 // may be empty: resolved by the CLI
};

// Parses and validates; collects every violation into one ValidationError.
ExperimentSpec load_experiment_text(const std::string& text);
ExperimentSpec load_experiment_file(const std::string& path);

// Canonical per-run config artifact written next to each log; parseable by
// load_scenario_text and digest-stable.
ScenarioConfig load_scenario_text(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

}  // namespace reciprosim
