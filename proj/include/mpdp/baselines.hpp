#pragma once

#include <cstdint>
#include <string>

#include "mpdp/core.hpp"
#include "mpdp/environments.hpp"
#include "mpdp/rng.hpp"

namespace mpdp {

// Forecast-free reference policies. They see only the current state (and the
// clock, for laxity), never a forecast window.

/// Best threshold of a grid search over 0..20 on the shipped queueing setup
/// (mu = 100, 10, 1; lambda 10..100 with period 50; cap 20; T = 200; exact forecasts).
inline constexpr std::size_t kDefaultRsrtThreshold = 14;

enum class BaselineKind { fas, rsrt, sllf, random };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::fas;
  std::size_t threshold = kDefaultRsrtThreshold;  // RSRT only
  std::uint64_t seed = 0;     // random only
};

BaselineKind parse_baseline_kind(const std::string& name);
const char* to_string(BaselineKind kind);

/// Idle server with the largest service rate when a job is waiting, else wait.
ActionId fas_action(const QueueingEnv& env, StateId s);

/// The fastest server takes the head job whenever it is idle; slower servers are
/// engaged only while the queue is strictly longer than the threshold.
ActionId rsrt_action(const QueueingEnv& env, StateId s, std::size_t threshold);

/// Least laxity first: stands ordered by (departure - t) - remaining / mu, ties by
/// stand index, filled greedily up to the station cap among feasible actions.
ActionId sllf_action(const EvEnv& env, StateId s, Time t);

/// Uniform action drawn from a hash of (seed, t, s), so a schedule and an on-line
/// rollout agree without sharing generator state.
ActionId random_action(std::size_t num_actions, std::uint64_t seed, Time t, StateId s);

PolicySchedule fas_schedule(const QueueingEnv& env);
PolicySchedule rsrt_schedule(const QueueingEnv& env, std::size_t threshold);
PolicySchedule sllf_schedule(const EvEnv& env);
PolicySchedule random_schedule(const NonStationaryMdp& mdp, std::uint64_t seed);

}  // namespace mpdp
