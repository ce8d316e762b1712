#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reciprosim/config.hpp"
#include "reciprosim/detectors.hpp"

namespace reciprosim {

// Paired sign test over per-seed metric values; no distributional claims.
struct PairedComparison {
  std::string metric;
  std::string control;
  std::uint32_t wins = 0;    // treatment > control
  std::uint32_t losses = 0;  // treatment < control
  std::uint32_t ties = 0;
  double median_difference = 0.0;

  bool operator==(const PairedComparison&) const = default;
};

// Throws LengthMismatch on unequal series.
PairedComparison compare(const std::string& metric, const std::string& control,
                         const std::vector<double>& treatment,
                         const std::vector<double>& control_values);

struct RunArtifacts {
  std::uint64_t seed = 0;
  std::string variant;  // "treatment" or control switch name
  std::string log_path;
  std::string config_path;
  std::string report_csv_path;
  MacrostateReport report;
};

struct ExperimentResult {
  std::vector<RunArtifacts> runs;          // ordered (seed, variant)
  std::vector<PairedComparison> comparisons;
  std::string aggregate_csv_path;
  std::string comparisons_csv_path;
  std::string manifest_path;
};

// Runs treatment plus every configured control for every seed, writes logs,
// canonical configs, per-run report CSVs, one aggregate CSV (one row per
// (seed, metric), sorted by (metric, seed)) and the paired sign tests.
// Reruns into the same directory are byte-identical. jobs > 1 parallelizes
// across seeds (OpenMP) without changing any output byte.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned jobs = 1);

// Flat numeric view of a report used for aggregate rows and comparisons:
// (metric name, value-as-text, decimal or NONE). Stable order.
std::vector<std::pair<std::string, std::optional<double>>> metric_values(
    const MacrostateReport& r);

}  // namespace reciprosim
