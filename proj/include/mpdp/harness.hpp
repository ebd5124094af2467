#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpdp/analysis.hpp"
#include "mpdp/config.hpp"
#include "mpdp/environments.hpp"
#include "mpdp/planner.hpp"

namespace mpdp {

/// A built environment with its oracle solve, shared read-only between trials.
struct PreparedEnv {
  std::string type;
  NonStationaryMdp mdp;
  StateId initial_state = 0;
  OracleSolution oracle;
  std::optional<QueueingEnv> queueing;
  std::optional<EvEnv> ev;
  std::optional<ContractionCertificate> certificate;
  std::optional<DiameterEstimate> diameter;
};

/// True when the env block describes a different MDP for every trial.
bool env_is_random(const ExperimentConfig& cfg);

/// Builds the env for one trial (env_seed matters only for random envs) and solves it.
std::shared_ptr<const PreparedEnv> prepare_env(const ExperimentConfig& cfg, std::uint64_t env_seed);

/// Sizing without building the MDP.
EnvSizing describe_env(const ExperimentConfig& cfg);

struct TrialRow {
  std::size_t trial = 0;
  double sweep_value = 0.0;
  double regret = 0.0;
  double optimal_value = 0.0;
  double achieved_value = 0.0;
  std::optional<double> bound;
  std::uint64_t seed = 0;
  double wall_time = 0.0;       // seconds; not written to CSV, which must stay reproducible
  bool exact = true;            // exact policy evaluation rather than one sampled trajectory
  std::vector<double> energy;   // EV env only: energy delivered per epoch
};

struct SweepSummary {
  double sweep_value = 0.0;
  std::size_t trials = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> bound;  // mean attached bound
};

struct RegretReport {
  std::vector<TrialRow> rows;  // ordered by (sweep point, trial)
  std::vector<SweepSummary> summary;
  std::vector<double> price;  // EV env only: price per epoch
};

std::uint64_t trial_seed(std::uint64_t master, std::size_t sweep_index, std::size_t trial);
std::uint64_t env_seed(std::uint64_t master, std::size_t trial);

/// One trial of a config without a sweep (sweep_value 0).
TrialRow run_trial(const ExperimentConfig& cfg, std::size_t trial_index);

/// One trial against an already prepared env.
TrialRow run_trial(const ExperimentConfig& cfg, const PreparedEnv& env, std::size_t sweep_index,
                   std::size_t trial_index, double sweep_value = 0.0);

struct RunOptions {
  std::size_t workers = 0;  // 0: MPDP_WORKERS, else hardware concurrency
};

std::size_t default_workers();

/// All sweep points (or the single config) times all trials, gathered in order.
RegretReport run_sweep(const ExperimentConfig& cfg, const RunOptions& options = {});

std::vector<SweepSummary> summarize(const std::vector<TrialRow>& rows);

/// Writes path and its sibling <stem>.summary.csv.
void emit_csv(const RegretReport& report, const std::filesystem::path& path);
std::filesystem::path summary_path(const std::filesystem::path& path);

/// Reads back the per-trial file written by emit_csv.
std::vector<TrialRow> parse_csv(const std::filesystem::path& path);

/// Mean energy per epoch for each sweep point (EV runs): sweep_value,t,price,energy.
void emit_energy_csv(const RegretReport& report, const std::filesystem::path& path);
std::filesystem::path energy_path(const std::filesystem::path& path);

}  // namespace mpdp
