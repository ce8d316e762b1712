#include "reciprosim/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "reciprosim/error.hpp"

namespace reciprosim {

namespace {

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

std::string trim(std::string s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(Err::ParseError, "config line " + std::to_string(line) + ": " + what);
}

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) parse_fail(line_no, "bad section name");
      out.sections[section];  // a section may legitimately stay empty
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) parse_fail(line_no, "bad key '" + key + "'");
    if (value.empty()) parse_fail(line_no, "empty value for '" + key + "'");
    if (section.empty()) parse_fail(line_no, "assignment before any [section]");
    auto [it, inserted] = out.sections[section].emplace(key, std::make_pair(value, line_no));
    if (!inserted)
      parse_fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
  }
  return out;
}

namespace {

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(Err::ParseError, what + ": '" + s + "' is not an unsigned integer");
  return v;
}

// "A..B" inclusive range or comma list; both forms may not be mixed.
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    std::uint64_t a = parse_u64(trim(s.substr(0, dots)), "seed range start");
    std::uint64_t b = parse_u64(trim(s.substr(dots + 2)), "seed range end");
    if (b < a) fail(Err::ParseError, "seed range end below start");
    if (b - a >= 10000) fail(Err::ParseError, "seed range too large (max 10000)");
    for (std::uint64_t v = a; ; ++v) {
      out.push_back(v);
      if (v == b) break;
    }
    return out;
  }
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(parse_u64(trim(item), "seed"));
  if (out.empty()) fail(Err::ParseError, "empty seed list");
  return out;
}

constexpr const char* kDetectorKeys[] = {"delta", "epsilon", "window",
                                         "min_duration", "need_threshold"};
constexpr const char* kExperimentKeys[] = {"scenario", "seeds", "controls", "out"};

template <std::size_t N>
bool known(const char* const (&keys)[N], const std::string& k) {
  for (const char* key : keys)
    if (k == key) return true;
  return false;
}

}  // namespace

ExperimentSpec load_experiment_text(const std::string& text) {
  ConfigFile file = parse_config_text(text);
  std::vector<std::string> problems;
  auto complain = [&problems](std::size_t line, const std::string& what) {
    problems.push_back("line " + std::to_string(line) + ": " + what);
  };

  for (const auto& [name, _] : file.sections)
    if (name != "experiment" && name != "scenario" && name != "detector")
      problems.push_back("unknown section [" + name + "]");

  ExperimentSpec spec;
  auto exp_it = file.sections.find("experiment");
  if (exp_it == file.sections.end()) {
    problems.push_back("missing [experiment] section");
  } else {
    const auto& exp = exp_it->second;
    for (const auto& [key, val] : exp)
      if (!known(kExperimentKeys, key))
        complain(val.second, "unknown experiment key '" + key + "'");

    std::optional<ScenarioKind> kind;
    if (auto it = exp.find("scenario"); it != exp.end()) {
      try {
        kind = scenario_from_name(it->second.first);
      } catch (const SimError& e) {
        complain(it->second.second, e.what());
      }
    } else {
      problems.push_back("[experiment] needs 'scenario = KIND'");
    }

    if (auto it = exp.find("seeds"); it != exp.end()) {
      try {
        spec.seeds = parse_seeds(it->second.first);
      } catch (const SimError& e) {
        complain(it->second.second, e.what());
      }
    } else {
      spec.seeds = {1};
    }

    if (auto it = exp.find("controls"); it != exp.end()) {
      std::istringstream in(it->second.first);
      std::string item;
      while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item != "giving_disabled" && item != "tokens_disabled" &&
            item != "memory_disabled")
          complain(it->second.second, "unknown control '" + item + "'");
        else
          spec.controls.push_back(item);
      }
    }

    if (auto it = exp.find("out"); it != exp.end()) spec.out_dir = it->second.first;

    if (kind) {
      std::map<std::string, std::string> overrides;
      if (auto sc = file.sections.find("scenario"); sc != file.sections.end())
        for (const auto& [key, val] : sc->second) overrides[key] = val.first;
      try {
        spec.scenario = make_scenario(*kind, overrides);
        for (const std::string& msg : validate_scenario(spec.scenario))
          problems.push_back(msg);
      } catch (const SimError& e) {
        problems.push_back(e.what());
      }
    }
  }

  if (auto det = file.sections.find("detector"); det != file.sections.end()) {
    for (const auto& [key, val] : det->second) {
      if (!known(kDetectorKeys, key)) {
        complain(val.second, "unknown detector key '" + key + "'");
        continue;
      }
      try {
        std::uint64_t v = parse_u64(val.first, key);
        if (key == "delta") spec.detectors.credit.delta = static_cast<Amount>(v);
        else if (key == "epsilon") spec.detectors.credit.epsilon = static_cast<Amount>(v);
        else if (key == "window") spec.detectors.credit.window = v;
        else if (key == "min_duration") spec.detectors.credit.min_duration = v;
        else spec.detectors.need_threshold = static_cast<Amount>(v);
      } catch (const SimError& e) {
        complain(val.second, e.what());
      }
    }
  }
  const CreditParams& cp = spec.detectors.credit;
  if (cp.delta <= cp.epsilon) problems.push_back("detector needs delta > epsilon");
  if (cp.min_duration < 1) problems.push_back("detector needs min_duration >= 1");
  if (cp.window <= cp.min_duration) problems.push_back("detector needs window > min_duration");

  if (!problems.empty()) {
    std::string msg;
    for (const std::string& p : problems) {
      if (!msg.empty()) msg += "; ";
      msg += p;
    }
    fail(Err::ValidationError, msg);
  }
  return spec;
}

ScenarioConfig load_scenario_text(const std::string& text) {
  ConfigFile file = parse_config_text(text);
  for (const auto& [name, _] : file.sections)
    if (name != "scenario")
      fail(Err::ConfigInvalid, "scenario artifact may only contain [scenario]");
  auto it = file.sections.find("scenario");
  if (it == file.sections.end())
    fail(Err::ConfigInvalid, "missing [scenario] section");
  auto kind_it = it->second.find("kind");
  if (kind_it == it->second.end())
    fail(Err::ConfigInvalid, "missing 'kind' in [scenario]");
  ScenarioKind kind = scenario_from_name(kind_it->second.first);
  std::map<std::string, std::string> overrides;
  for (const auto& [key, val] : it->second)
    if (key != "kind") overrides[key] = val.first;
  return make_scenario(kind, overrides);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ExperimentSpec load_experiment_file(const std::string& path) {
  return load_experiment_text(read_file(path));
}

ScenarioConfig load_scenario_file(const std::string& path) {
  return load_scenario_text(read_file(path));
}

}  // namespace reciprosim
