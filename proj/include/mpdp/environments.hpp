#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpdp/core.hpp"
#include "mpdp/forecast.hpp"
#include "mpdp/rng.hpp"

namespace mpdp {

inline constexpr std::size_t kDefaultStateBudget = 1'000'000;

// ---------------------------------------------------------------------------
// Multi-server queue with one uniformized event per step, ordered arrival ->
// dispatch -> completion: a job arrives (rate lambda_t) and may be dispatched at
// once, or the dispatch happens and a busy server finishes (rate mu_i); the
// rates of idle servers fold into a self-loop.

struct QueueConfig {
  std::vector<double> service_rates{100.0, 10.0, 1.0};
  std::function<double(Time)> arrival_rate;
  std::size_t queue_cap = 20;
  Time horizon = 200;
  std::size_t max_states = kDefaultStateBudget;
};

/// lambda_t oscillating between lo and hi with the given period, starting at lo.
std::function<double(Time)> sinusoid_rate(double lo, double hi, double period, double phase = 0.0);

struct QueueState {
  std::size_t queue = 0;
  std::uint32_t busy = 0;  // bit i set when server i is serving a job
};

class QueueCodec {
 public:
  QueueCodec() = default;
  QueueCodec(std::size_t num_servers, std::size_t queue_cap);

  std::size_t num_servers() const { return servers_; }
  std::size_t queue_cap() const { return cap_; }
  std::size_t num_states() const { return (cap_ + 1) << servers_; }
  std::size_t num_actions() const { return servers_ + 1; }
  ActionId wait_action() const { return servers_; }

  StateId encode(const QueueState& q) const;
  QueueState decode(StateId s) const;

 private:
  std::size_t servers_ = 0;
  std::size_t cap_ = 0;
};

/// Builds P_t for any arrival rate from a precomputed sparsity pattern; every
/// entry's probability is (a lambda + b) / (lambda + sum mu).
class QueueKernelFactory {
 public:
  QueueKernelFactory(const QueueConfig& cfg, const QueueCodec& codec);
  TransitionKernel operator()(double arrival_rate) const;

 private:
  TransitionKernel pattern_;
  std::vector<double> arrival_coef_;
  std::vector<double> service_coef_;
  double mu_total_ = 0.0;
};

struct QueueingEnv {
  QueueConfig config;
  QueueCodec codec;
  std::shared_ptr<const QueueKernelFactory> kernels;
  NonStationaryMdp mdp;
  StateId initial_state = 0;  // empty queue, all servers idle

  /// lambda_t as the forecastable parameter; kernel(t, lambda) rebuilds P_t.
  ParametricModel parametric_model() const;
};

void validate(const QueueConfig& cfg);

/// P_t for a given arrival rate.
TransitionKernel queue_kernel(const QueueConfig& cfg, const QueueCodec& codec, double arrival_rate);

/// 1 - (queue + busy servers) / (queue_cap + servers), independent of the action.
RewardTable queue_reward(const QueueConfig& cfg, const QueueCodec& codec);

QueueingEnv build_queueing_mdp(const QueueConfig& cfg);

// ---------------------------------------------------------------------------
// EV charging station. Each accepted EV occupies the lowest-index free stand
// for epochs arrival..departure-1 and must receive its whole demand there.

struct EvArrival {
  Time arrival = 0;
  Time departure = 1;  // exclusive
  double energy = 0.0;
};

struct EvConfig {
  std::size_t num_stands = 3;
  double rate_cap = 1.0;     // mu, per stand per step
  double station_cap = 2.0;  // C, per step
  double demand_quantum = 1.0;
  std::function<double(Time)> price;
  double price_max = 18.0;
  double low_price_threshold = 8.0;
  std::vector<EvArrival> arrivals;
  Time horizon = 48;
  std::size_t max_states = kDefaultStateBudget;
};

/// Smoothed square wave between lo and hi: high for the first half of each period.
std::function<double(Time)> square_wave_price(double lo, double hi, double period,
                                              double sharpness = 3.0, double phase = 0.0);

struct EvArrivalModel {
  double arrival_prob = 0.5;  // chance that an EV shows up at each epoch
  Time min_stay = 2;
  Time max_stay = 8;
  std::size_t max_demand = 4;  // quanta
};

/// Random arrival list for one trial; redrawn until the station can serve every
/// accepted EV.
std::vector<EvArrival> sample_ev_arrivals(const EvConfig& base, const EvArrivalModel& model, Rng& rng);

class EvCodec {
 public:
  EvCodec() = default;
  explicit EvCodec(std::vector<std::size_t> max_levels);

  std::size_t num_stands() const { return radix_.size(); }
  std::size_t num_states() const { return states_; }
  StateId encode(std::span<const std::size_t> remaining) const;
  std::vector<std::size_t> decode(StateId s) const;

 private:
  std::vector<std::size_t> radix_;
  std::size_t states_ = 1;
};

inline constexpr std::size_t kNoStand = static_cast<std::size_t>(-1);

struct EvEnv {
  EvConfig config;
  EvCodec codec;
  NonStationaryMdp mdp;
  StateId initial_state = 0;
  std::vector<std::vector<std::size_t>> actions;  // per-stand charge levels (quanta)
  std::vector<std::size_t> stand_of;              // per arrival; kNoStand when turned away
  std::vector<std::vector<bool>> feasible;        // (t, s) can still meet every deadline
  std::vector<std::vector<ActionId>> remap;       // (t, s*A + a) -> action actually applied
  std::vector<std::vector<double>> energy;        // (t, s*A + a) -> energy delivered
  // Per epoch and stand: index of the EV present, or kNoStand.
  std::vector<std::vector<std::size_t>> occupant;

  bool action_feasible(Time t, StateId s, ActionId a) const { return remap[t][s * actions.size() + a] == a; }
  /// Departure epoch of the EV at the stand during epoch t, kNoStand when empty.
  Time departure(Time t, std::size_t stand) const;
  std::size_t rate_levels() const;
};

void validate(const EvConfig& cfg);

/// Stand assignment in arrival order; an EV that finds every stand busy leaves.
std::vector<std::size_t> assign_stands(const std::vector<EvArrival>& arrivals, std::size_t num_stands);

/// Throws ConfigError when the accepted EVs cannot all be served.
EvEnv build_ev_mdp(const EvConfig& cfg);

/// Energy delivered at each epoch along the (deterministic) trajectory from the
/// initial state under the schedule.
std::vector<double> ev_energy_profile(const EvEnv& env, const PolicySchedule& schedule);

/// Share of delivered energy falling in epochs with price below the low-price threshold.
double low_price_energy_fraction(const EvEnv& env, const std::vector<double>& energy);

// ---------------------------------------------------------------------------

/// Rows (1 - m) Dirichlet(1) + m uniform, rewards uniform in [0, 1]. Any two rows
/// then overlap by at least m, so one-step windows contract with gamma <= 1 - m.
NonStationaryMdp random_ergodic_mdp(std::size_t num_states, std::size_t num_actions, Time T,
                                    double mixing_floor, std::uint64_t seed);

struct EnvSizing {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  Time horizon = 0;
  std::size_t max_nonzeros = 0;  // upper bound on stored transitions over all epochs
  std::size_t memory_bytes = 0;  // rough estimate of kernel + reward storage
};

EnvSizing size_queueing(const QueueConfig& cfg);
EnvSizing size_ev(const EvConfig& cfg);
EnvSizing size_random(std::size_t num_states, std::size_t num_actions, Time T);

}  // namespace mpdp
