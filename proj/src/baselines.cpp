#include "mpdp/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace mpdp {

namespace {

// Server indices by decreasing service rate, ties by index.
std::vector<std::size_t> speed_order(const QueueingEnv& env) {
  const auto& mu = env.config.service_rates;
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mu[a] > mu[b]; });
  return order;
}

}  // namespace

BaselineKind parse_baseline_kind(const std::string& name) {
  if (name == "fas" || name == "FAS") return BaselineKind::fas;
  if (name == "rsrt" || name == "RSRT") return BaselineKind::rsrt;
  if (name == "sllf" || name == "sLLF") return BaselineKind::sllf;
  if (name == "random") return BaselineKind::random;
  throw ConfigError("unknown baseline '" + name + "' (expected fas, rsrt, sllf or random)");
}

const char* to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::fas: return "fas";
    case BaselineKind::rsrt: return "rsrt";
    case BaselineKind::sllf: return "sllf";
    case BaselineKind::random: return "random";
  }
  return "?";
}

ActionId fas_action(const QueueingEnv& env, StateId s) {
  const QueueState q = env.codec.decode(s);
  if (q.queue == 0) return env.codec.wait_action();
  for (std::size_t i : speed_order(env)) {
    if (!(q.busy >> i & 1U)) return i;
  }
  return env.codec.wait_action();
}

ActionId rsrt_action(const QueueingEnv& env, StateId s, std::size_t threshold) {
  const QueueState q = env.codec.decode(s);
  if (q.queue == 0) return env.codec.wait_action();
  const auto order = speed_order(env);
  if (!(q.busy >> order.front() & 1U)) return order.front();
  if (q.queue <= threshold) return env.codec.wait_action();
  for (std::size_t i : order) {
    if (!(q.busy >> i & 1U)) return i;
  }
  return env.codec.wait_action();
}

ActionId sllf_action(const EvEnv& env, StateId s, Time t) {
  if (t > env.mdp.horizon()) throw IndexError("sllf_action: epoch beyond horizon");
  const auto rem = env.codec.decode(s);
  const std::size_t n = rem.size();
  const double mu = static_cast<double>(env.rate_levels());
  std::vector<double> laxity(n, 0.0);
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j) {
    const Time d = env.departure(t, j);
    if (d == kNoStand || rem[j] == 0) continue;
    laxity[j] = static_cast<double>(d - t) - static_cast<double>(rem[j]) / mu;
    order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return laxity[a] < laxity[b]; });

  // Greedy fill in laxity order is the lexicographic maximum of the rate
  // vector read in that order; restricting to feasible actions keeps every
  // deadline reachable.
  const std::size_t A = env.actions.size();
  ActionId best = A;
  for (ActionId a = 0; a < A; ++a) {
    if (!env.action_feasible(t, s, a)) continue;
    const auto& act = env.actions[a];
    bool idle_charge = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (act[j] > 0 && std::find(order.begin(), order.end(), j) == order.end()) idle_charge = true;
    }
    if (idle_charge) continue;
    if (best == A) {
      best = a;
      continue;
    }
    const auto& cur = env.actions[best];
    for (std::size_t j : order) {
      if (act[j] != cur[j]) {
        if (act[j] > cur[j]) best = a;
        break;
      }
    }
  }
  return best == A ? env.remap[t][s * A] : best;
}

PolicySchedule fas_schedule(const QueueingEnv& env) {
  PolicySchedule out(env.mdp.num_epochs(), env.mdp.num_states());
  for (StateId s = 0; s < env.mdp.num_states(); ++s) {
    const ActionId a = fas_action(env, s);
    for (Time t = 0; t < out.num_epochs(); ++t) out.set(t, s, a);
  }
  return out;
}

PolicySchedule rsrt_schedule(const QueueingEnv& env, std::size_t threshold) {
  PolicySchedule out(env.mdp.num_epochs(), env.mdp.num_states());
  for (StateId s = 0; s < env.mdp.num_states(); ++s) {
    const ActionId a = rsrt_action(env, s, threshold);
    for (Time t = 0; t < out.num_epochs(); ++t) out.set(t, s, a);
  }
  return out;
}

PolicySchedule sllf_schedule(const EvEnv& env) {
  PolicySchedule out(env.mdp.num_epochs(), env.mdp.num_states());
  for (Time t = 0; t < out.num_epochs(); ++t) {
    for (StateId s = 0; s < env.mdp.num_states(); ++s) out.set(t, s, sllf_action(env, s, t));
  }
  return out;
}

ActionId random_action(std::size_t num_actions, std::uint64_t seed, Time t, StateId s) {
  if (num_actions == 0) throw InputError("random_action: no actions");
  return derive_seed(seed, t, s) % num_actions;
}

PolicySchedule random_schedule(const NonStationaryMdp& mdp, std::uint64_t seed) {
  PolicySchedule out(mdp.num_epochs(), mdp.num_states());
  for (Time t = 0; t < out.num_epochs(); ++t) {
    for (StateId s = 0; s < mdp.num_states(); ++s) out.set(t, s, random_action(mdp.num_actions(), seed, t, s));
  }
  return out;
}

}  // namespace mpdp
