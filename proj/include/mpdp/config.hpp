#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpdp/analysis.hpp"
#include "mpdp/baselines.hpp"

namespace mpdp {

enum class ForecastKind { exact, perturbed, parametric };
enum class PlannerKind { mpdp, baseline, optimal };
enum class EvaluationMode { automatic, exact, monte_carlo };

struct ForecastSpec {
  ForecastKind kind = ForecastKind::exact;
  std::vector<double> eps;    // perturbed: one entry is broadcast over every lookahead
  std::vector<double> delta;
  double base = 0.0;          // parametric noise
  double growth = 0.0;
};

struct PlannerSpec {
  PlannerKind kind = PlannerKind::mpdp;
  std::size_t k = 0;
  BaselineSpec baseline;
};

struct SweepSpec {
  std::string parameter;  // dotted path into the config document, e.g. "planner.k"
  std::vector<double> values;
};

struct BoundSpec {
  std::size_t J = 1;
  ContractionMode mode;
  Time cutoff = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::filesystem::path output = "results.csv";
  EvaluationMode evaluation = EvaluationMode::automatic;
  std::size_t exact_budget = 50'000'000;  // max |S| (T+1) for exact evaluation in automatic mode
  nlohmann::json env;                     // validated block, interpreted by the harness
  ForecastSpec forecast;
  PlannerSpec planner;
  std::optional<SweepSpec> sweep;
  std::optional<BoundSpec> bound;
  std::filesystem::path base_dir;         // relative paths resolve against this
  nlohmann::json document;                // the full source document, for sweeps
};

/// Parses and validates a config document; throws ConfigError naming the bad key.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes value at a dotted path, creating intermediate objects.
void set_path(nlohmann::json& doc, const std::string& dotted, const nlohmann::json& value);

/// The config with the sweep parameter set to value (and the sweep itself removed).
ExperimentConfig with_sweep_value(const ExperimentConfig& cfg, double value);

const char* to_string(ForecastKind kind);
const char* to_string(PlannerKind kind);

}  // namespace mpdp
