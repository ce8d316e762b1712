#include "reciprosim/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reciprosim/engine.hpp"
#include "reciprosim/error.hpp"

namespace reciprosim {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

PairedComparison compare(const std::string& metric, const std::string& control,
                         const std::vector<double>& treatment,
                         const std::vector<double>& control_values) {
  if (treatment.size() != control_values.size())
    fail(Err::LengthMismatch, "paired series of unequal length");
  PairedComparison c;
  c.metric = metric;
  c.control = control;
  std::vector<double> diffs;
  diffs.reserve(treatment.size());
  for (std::size_t i = 0; i < treatment.size(); ++i) {
    if (treatment[i] > control_values[i]) c.wins += 1;
    else if (treatment[i] < control_values[i]) c.losses += 1;
    else c.ties += 1;
    diffs.push_back(treatment[i] - control_values[i]);
  }
  c.median_difference = median_of(std::move(diffs));
  return c;
}

std::vector<std::pair<std::string, std::optional<double>>> metric_values(
    const MacrostateReport& r) {
  // Derived from the CSV rendering so names and values can never drift apart.
  std::vector<std::pair<std::string, std::optional<double>>> out;
  std::istringstream in(report_csv(r));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    auto c1 = line.find(',');
    auto c2 = line.rfind(',');
    std::string name = line.substr(0, c1);
    std::string decimal = line.substr(c2 + 1);
    if (decimal == "NONE")
      out.emplace_back(std::move(name), std::nullopt);
    else
      out.emplace_back(std::move(name), std::stod(decimal));
  }
  return out;
}

namespace {

struct RunRecipe {
  std::uint64_t seed = 0;
  std::string variant;  // "treatment" or control switch name
  ScenarioConfig config;
  std::string stem;  // artifact basename without extension
};

struct RunOutput {
  EventLog log;
  MacrostateReport report;  // control runs: no paired control attached
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Err::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(Err::IoError, "short write to '" + path.string() + "'");
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned jobs) {
  namespace fs = std::filesystem;
  const fs::path out_dir = spec.out_dir.empty() ? fs::path(".") : fs::path(spec.out_dir);
  fs::create_directories(out_dir);

  const std::string kind = lower(scenario_name(spec.scenario.kind));
  std::vector<RunRecipe> recipes;
  for (std::uint64_t seed : spec.seeds) {
    RunRecipe treat;
    treat.seed = seed;
    treat.variant = "treatment";
    treat.config = spec.scenario;
    treat.stem = kind + "_seed" + std::to_string(seed);
    recipes.push_back(treat);
    for (const std::string& ctrl : spec.controls) {
      RunRecipe r;
      r.seed = seed;
      r.variant = ctrl;
      r.config = apply_control(spec.scenario, ctrl);
      r.stem = treat.stem + ".ctrl-" + ctrl;
      recipes.push_back(r);
    }
  }

  // Phase 1: simulate. Seeds are independent, so this is the parallel axis;
  // every output byte is a pure function of (config, seed).
  std::vector<RunOutput> outputs(recipes.size());
  std::vector<std::string> errors(recipes.size());
  const int n = static_cast<int>(recipes.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(std::max(1u, jobs)))
#endif
  for (int i = 0; i < n; ++i) {
    try {
      outputs[i].log = run(recipes[i].config, recipes[i].seed);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty())
      fail(Err::ValidationError, recipes[i].stem + ": " + errors[i]);

  // Phase 2: analyze. The treatment report gets the giving_disabled control
  // attached when that control ran (buffering index needs the paired log).
  for (int i = 0; i < n; ++i) {
    const EventLog* ctrl_log = nullptr;
    const ScenarioConfig* ctrl_cfg = nullptr;
    if (recipes[i].variant == "treatment") {
      for (int j = i + 1; j < n && recipes[j].seed == recipes[i].seed; ++j) {
        if (recipes[j].variant == "giving_disabled") {
          ctrl_log = &outputs[j].log;
          ctrl_cfg = &recipes[j].config;
          break;
        }
      }
    }
    outputs[i].report =
        summarize(outputs[i].log, recipes[i].config, spec.detectors, ctrl_log, ctrl_cfg);
  }

  // Phase 3: artifacts, written in fixed order.
  ExperimentResult result;
  for (int i = 0; i < n; ++i) {
    RunArtifacts art;
    art.seed = recipes[i].seed;
    art.variant = recipes[i].variant;
    art.log_path = (out_dir / (recipes[i].stem + ".log")).string();
    art.config_path = (out_dir / (recipes[i].stem + ".config")).string();
    art.report_csv_path = (out_dir / (recipes[i].stem + ".report.csv")).string();
    art.report = outputs[i].report;
    write_file(art.log_path, log_to_string(outputs[i].log));
    write_file(art.config_path, canonical_text(recipes[i].config));
    write_file(art.report_csv_path, report_csv(outputs[i].report));
    result.runs.push_back(std::move(art));
  }

  // Aggregate CSV: one row per (seed, metric); control metrics are namespaced
  // as "<control>:<metric>" so the row key stays (metric, seed).
  struct AggRow {
    std::string metric;
    std::uint64_t seed;
    std::string value;
    std::string decimal;
  };
  std::vector<AggRow> agg;
  for (int i = 0; i < n; ++i) {
    const std::string prefix =
        recipes[i].variant == "treatment" ? "" : recipes[i].variant + ":";
    std::istringstream in(report_csv(outputs[i].report));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      auto c1 = line.find(',');
      auto c2 = line.rfind(',');
      agg.push_back({prefix + line.substr(0, c1), recipes[i].seed,
                     line.substr(c1 + 1, c2 - c1 - 1), line.substr(c2 + 1)});
    }
  }
  std::stable_sort(agg.begin(), agg.end(), [](const AggRow& a, const AggRow& b) {
    if (a.metric != b.metric) return a.metric < b.metric;
    return a.seed < b.seed;
  });
  std::string agg_text = "metric,seed,value,decimal\n";
  for (const AggRow& row : agg)
    agg_text += row.metric + "," + std::to_string(row.seed) + "," + row.value + "," +
                row.decimal + "\n";
  result.aggregate_csv_path = (out_dir / (kind + "_aggregate.csv")).string();
  write_file(result.aggregate_csv_path, agg_text);

  // Paired sign tests: treatment vs each control, metric by metric, skipping
  // metrics undefined (NONE) for any seed on either side.
  for (const std::string& ctrl : spec.controls) {
    std::vector<const MacrostateReport*> treat, control;
    for (int i = 0; i < n; ++i) {
      if (recipes[i].variant == "treatment") treat.push_back(&outputs[i].report);
      else if (recipes[i].variant == ctrl) control.push_back(&outputs[i].report);
    }
    if (treat.empty() || treat.size() != control.size()) continue;
    const auto names = metric_values(*treat[0]);
    for (std::size_t m = 0; m < names.size(); ++m) {
      std::vector<double> tv, cv;
      bool defined = true;
      for (std::size_t s = 0; s < treat.size() && defined; ++s) {
        auto t = metric_values(*treat[s])[m].second;
        auto c = metric_values(*control[s])[m].second;
        if (!t || !c) defined = false;
        else {
          tv.push_back(*t);
          cv.push_back(*c);
        }
      }
      if (!defined) continue;
      result.comparisons.push_back(compare(names[m].first, ctrl, tv, cv));
    }
  }
  std::string cmp_text = "metric,control,wins,losses,ties,median_difference\n";
  for (const PairedComparison& c : result.comparisons)
    cmp_text += c.metric + "," + c.control + "," + std::to_string(c.wins) + "," +
                std::to_string(c.losses) + "," + std::to_string(c.ties) + "," +
                fixed6(c.median_difference) + "\n";
  result.comparisons_csv_path = (out_dir / (kind + "_comparisons.csv")).string();
  write_file(result.comparisons_csv_path, cmp_text);

  // Manifest: what this experiment produced, in order.
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(config_digest(spec.scenario)));
  std::string manifest = "reciprosim experiment\n";
  manifest += "scenario = " + std::string(scenario_name(spec.scenario.kind)) + "\n";
  manifest += "config = " + std::string(digest) + "\n";
  manifest += "seeds =";
  for (std::uint64_t s : spec.seeds) manifest += " " + std::to_string(s);
  manifest += "\ncontrols =";
  for (const std::string& c : spec.controls) manifest += " " + c;
  manifest += "\nfiles:\n";
  for (const RunArtifacts& art : result.runs) {
    manifest += "  " + fs::path(art.log_path).filename().string() + "\n";
    manifest += "  " + fs::path(art.config_path).filename().string() + "\n";
    manifest += "  " + fs::path(art.report_csv_path).filename().string() + "\n";
  }
  manifest += "  " + fs::path(result.aggregate_csv_path).filename().string() + "\n";
  manifest += "  " + fs::path(result.comparisons_csv_path).filename().string() + "\n";
  result.manifest_path = (out_dir / (kind + "_manifest.txt")).string();
  write_file(result.manifest_path, manifest);
  return result;
}

}  // namespace reciprosim
