#include "mpdp/environments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace mpdp {

namespace {

std::size_t quanta(double amount, double quantum, const char* what) {
  const double ratio = amount / quantum;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError(std::string(what) + " " + std::to_string(amount) +
                      " is not a whole number of demand quanta");
  }
  return static_cast<std::size_t>(rounded);
}

std::size_t floor_quanta(double amount, double quantum) {
  return static_cast<std::size_t>(std::floor(amount / quantum + 1e-9));
}

void check_budget(std::size_t states, std::size_t budget, const char* env) {
  if (states > budget) {
    throw BudgetError(std::string(env) + " state space has " + std::to_string(states) +
                      " states, above the budget of " + std::to_string(budget));
  }
}

}  // namespace

// --- queueing --------------------------------------------------------------------

std::function<double(Time)> sinusoid_rate(double lo, double hi, double period, double phase) {
  if (!(period > 0.0)) throw ConfigError("arrival period must be positive");
  return [=](Time t) {
    const double x = 2.0 * std::numbers::pi * (static_cast<double>(t) + phase) / period;
    return lo + (hi - lo) * 0.5 * (1.0 - std::cos(x));
  };
}

QueueCodec::QueueCodec(std::size_t num_servers, std::size_t queue_cap)
    : servers_(num_servers), cap_(queue_cap) {
  if (num_servers == 0 || num_servers > 16) throw ConfigError("queue needs 1..16 servers");
}

StateId QueueCodec::encode(const QueueState& q) const {
  if (q.queue > cap_ || q.busy >> servers_ != 0) throw IndexError("queue state out of range");
  return (q.queue << servers_) | q.busy;
}

QueueState QueueCodec::decode(StateId s) const {
  if (s >= num_states()) throw IndexError("queue state id " + std::to_string(s));
  return {s >> servers_, static_cast<std::uint32_t>(s & ((std::size_t{1} << servers_) - 1))};
}

void validate(const QueueConfig& cfg) {
  if (cfg.service_rates.empty()) throw ConfigError("queue needs at least one server");
  for (double mu : cfg.service_rates) {
    if (!(mu > 0.0)) throw ConfigError("service rates must be positive");
  }
  if (cfg.queue_cap < 1) throw ConfigError("queue_cap must be at least 1");
  if (!cfg.arrival_rate) throw ConfigError("queue needs an arrival rate function");
}

namespace {

struct QueueEntry {
  StateId next;
  double arrival;  // coefficient of lambda
  double service;  // constant part
};

// Successors of every (s, a) with probabilities (arrival * lambda + service) / (lambda + sum mu).
std::vector<std::vector<QueueEntry>> queue_rows(const QueueConfig& cfg, const QueueCodec& codec) {
  const std::size_t n = codec.num_servers();
  const std::size_t S = codec.num_states();
  const std::size_t A = codec.num_actions();
  auto dispatch = [&](QueueState q, ActionId a) {
    if (a < n && q.queue > 0 && !(q.busy >> a & 1U)) {
      --q.queue;
      q.busy |= 1U << a;
    }
    return q;
  };
  std::vector<std::vector<QueueEntry>> rows(S * A);
  for (StateId s = 0; s < S; ++s) {
    const QueueState q0 = codec.decode(s);
    for (ActionId a = 0; a < A; ++a) {
      auto& row = rows[s * A + a];
      // Arrival event: the job joins the queue (or is dropped at the cap) before dispatch.
      QueueState arrived = q0;
      if (arrived.queue < codec.queue_cap()) ++arrived.queue;
      row.push_back({codec.encode(dispatch(arrived, a)), 1.0, 0.0});
      // Otherwise dispatch, then possibly a completion at a busy server.
      const QueueState q = dispatch(q0, a);
      double stay = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (q.busy >> i & 1U) {
          row.push_back({codec.encode({q.queue, q.busy & ~(1U << i)}), 0.0, cfg.service_rates[i]});
        } else {
          stay += cfg.service_rates[i];
        }
      }
      row.push_back({codec.encode(q), 0.0, stay});
      std::sort(row.begin(), row.end(), [](const QueueEntry& x, const QueueEntry& y) { return x.next < y.next; });
      std::vector<QueueEntry> merged;
      for (const auto& e : row) {
        if (!merged.empty() && merged.back().next == e.next) {
          merged.back().arrival += e.arrival;
          merged.back().service += e.service;
        } else {
          merged.push_back(e);
        }
      }
      row = std::move(merged);
    }
  }
  return rows;
}

double total_service(const QueueConfig& cfg) {
  double mu = 0.0;
  for (double x : cfg.service_rates) mu += x;
  return mu;
}

void check_rate(double arrival_rate) {
  if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
    throw InputError("arrival rate must be finite and non-negative");
  }
}

}  // namespace

QueueKernelFactory::QueueKernelFactory(const QueueConfig& cfg, const QueueCodec& codec)
    : mu_total_(total_service(cfg)) {
  const auto rows = queue_rows(cfg, codec);
  // Pattern at lambda = 1 so that every arrival entry is present.
  std::vector<std::vector<Transition>> pattern(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& e : rows[r]) {
      if (e.arrival == 0.0 && e.service == 0.0) continue;
      pattern[r].push_back({e.next, (e.arrival + e.service) / (1.0 + mu_total_)});
      arrival_coef_.push_back(e.arrival);
      service_coef_.push_back(e.service);
    }
  }
  pattern_ = TransitionKernel(codec.num_states(), codec.num_actions(), std::move(pattern));
}

TransitionKernel QueueKernelFactory::operator()(double arrival_rate) const {
  check_rate(arrival_rate);
  const double total = arrival_rate + mu_total_;
  std::vector<double> probs(arrival_coef_.size());
  for (std::size_t e = 0; e < probs.size(); ++e) {
    probs[e] = (arrival_coef_[e] * arrival_rate + service_coef_[e]) / total;
  }
  return pattern_.reweighted(probs);
}

TransitionKernel queue_kernel(const QueueConfig& cfg, const QueueCodec& codec, double arrival_rate) {
  check_rate(arrival_rate);
  const double total = arrival_rate + total_service(cfg);
  const auto rows = queue_rows(cfg, codec);
  std::vector<std::vector<Transition>> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& e : rows[r]) out[r].push_back({e.next, (e.arrival * arrival_rate + e.service) / total});
  }
  return TransitionKernel(codec.num_states(), codec.num_actions(), std::move(out));
}

RewardTable queue_reward(const QueueConfig& cfg, const QueueCodec& codec) {
  const std::size_t S = codec.num_states();
  const std::size_t A = codec.num_actions();
  const double occupancy_max = static_cast<double>(cfg.queue_cap + codec.num_servers());
  std::vector<double> r(S * A);
  for (StateId s = 0; s < S; ++s) {
    const QueueState q = codec.decode(s);
    const double occupied = static_cast<double>(q.queue + std::popcount(q.busy));
    for (ActionId a = 0; a < A; ++a) r[s * A + a] = 1.0 - occupied / occupancy_max;
  }
  return RewardTable(S, A, std::move(r));
}

QueueingEnv build_queueing_mdp(const QueueConfig& cfg) {
  validate(cfg);
  if (cfg.service_rates.size() > 16) throw ConfigError("queue needs 1..16 servers");
  check_budget(size_queueing(cfg).num_states, cfg.max_states, "queueing");
  QueueingEnv env;
  env.config = cfg;
  env.codec = QueueCodec(cfg.service_rates.size(), cfg.queue_cap);
  env.kernels = std::make_shared<QueueKernelFactory>(cfg, env.codec);
  const auto reward = queue_reward(cfg, env.codec);
  std::vector<TransitionKernel> kernels;
  std::vector<RewardTable> rewards;
  kernels.reserve(cfg.horizon + 1);
  rewards.reserve(cfg.horizon + 1);
  for (Time t = 0; t <= cfg.horizon; ++t) {
    kernels.push_back((*env.kernels)(cfg.arrival_rate(t)));
    rewards.push_back(reward);
  }
  env.mdp = NonStationaryMdp(std::move(kernels), std::move(rewards));
  env.initial_state = env.codec.encode({0, 0});
  return env;
}

ParametricModel QueueingEnv::parametric_model() const {
  ParametricModel model;
  model.parameter = config.arrival_rate;
  model.kernel = [factory = kernels](Time, double lambda) { return (*factory)(lambda); };
  return model;
}

EnvSizing size_queueing(const QueueConfig& cfg) {
  EnvSizing out;
  const std::size_t n = cfg.service_rates.size();
  if (n > 16) throw ConfigError("queue needs 1..16 servers");
  out.num_states = (cfg.queue_cap + 1) << n;
  out.num_actions = n + 1;
  out.horizon = cfg.horizon;
  const std::size_t rows = out.num_states * out.num_actions;
  out.max_nonzeros = rows * (n + 2) * (cfg.horizon + 1);
  out.memory_bytes = out.max_nonzeros * sizeof(Transition) +
                     rows * (cfg.horizon + 1) * (sizeof(double) + sizeof(std::size_t));
  return out;
}

// --- EV charging -------------------------------------------------------------------

std::function<double(Time)> square_wave_price(double lo, double hi, double period,
                                              double sharpness, double phase) {
  if (!(period > 0.0) || !(sharpness > 0.0)) throw ConfigError("price period and sharpness must be positive");
  return [=](Time t) {
    const double x = 2.0 * std::numbers::pi * (static_cast<double>(t) + phase) / period;
    const double w = std::tanh(sharpness * std::sin(x)) / std::tanh(sharpness);
    return std::clamp(0.5 * (lo + hi) + 0.5 * (hi - lo) * w, lo, hi);
  };
}

EvCodec::EvCodec(std::vector<std::size_t> max_levels) : radix_(std::move(max_levels)) {
  states_ = 1;
  for (auto& r : radix_) {
    ++r;
    states_ *= r;
  }
}

StateId EvCodec::encode(std::span<const std::size_t> remaining) const {
  if (remaining.size() != radix_.size()) throw DimensionError("EV state has the wrong number of stands");
  StateId s = 0;
  for (std::size_t j = radix_.size(); j-- > 0;) {
    if (remaining[j] >= radix_[j]) throw IndexError("EV remaining demand out of range");
    s = s * radix_[j] + remaining[j];
  }
  return s;
}

std::vector<std::size_t> EvCodec::decode(StateId s) const {
  if (s >= states_) throw IndexError("EV state id " + std::to_string(s));
  std::vector<std::size_t> out(radix_.size());
  for (std::size_t j = 0; j < radix_.size(); ++j) {
    out[j] = s % radix_[j];
    s /= radix_[j];
  }
  return out;
}

Time EvEnv::departure(Time t, std::size_t stand) const {
  const std::size_t i = occupant.at(t).at(stand);
  return i == kNoStand ? kNoStand : config.arrivals[i].departure;
}

std::size_t EvEnv::rate_levels() const { return floor_quanta(config.rate_cap, config.demand_quantum); }

void validate(const EvConfig& cfg) {
  if (cfg.num_stands == 0) throw ConfigError("EV station needs at least one stand");
  if (!(cfg.rate_cap > 0.0) || !(cfg.station_cap > 0.0) || !(cfg.demand_quantum > 0.0)) {
    throw ConfigError("rate_cap, station_cap and demand_quantum must be positive");
  }
  if (floor_quanta(cfg.rate_cap, cfg.demand_quantum) == 0 ||
      floor_quanta(cfg.station_cap, cfg.demand_quantum) == 0) {
    throw ConfigError("demand_quantum exceeds the stand or station rate cap");
  }
  if (!cfg.price) throw ConfigError("EV station needs a price function");
  if (!(cfg.price_max > 0.0)) throw ConfigError("price_max must be positive");
  for (std::size_t i = 0; i < cfg.arrivals.size(); ++i) {
    const auto& ev = cfg.arrivals[i];
    const std::string tag = "EV " + std::to_string(i);
    if (ev.departure <= ev.arrival) throw ConfigError(tag + " departs before it arrives");
    if (ev.arrival > cfg.horizon || ev.departure > cfg.horizon + 1) {
      throw ConfigError(tag + " stays past the horizon");
    }
    if (!(ev.energy >= 0.0)) throw ConfigError(tag + " has negative demand");
    const std::size_t need = quanta(ev.energy, cfg.demand_quantum, "EV demand");
    const std::size_t cap = floor_quanta(cfg.rate_cap, cfg.demand_quantum) * (ev.departure - ev.arrival);
    if (need > cap) {
      throw ConfigError(tag + " demands more than the stand can deliver before departure");
    }
  }
  for (Time t = 0; t <= cfg.horizon; ++t) {
    const double p = cfg.price(t);
    if (!(p >= 0.0 && p <= cfg.price_max)) {
      throw ConfigError("price at epoch " + std::to_string(t) + " outside [0, price_max]");
    }
  }
}

std::vector<std::size_t> assign_stands(const std::vector<EvArrival>& arrivals, std::size_t num_stands) {
  std::vector<std::size_t> order(arrivals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return arrivals[x].arrival < arrivals[y].arrival; });
  std::vector<Time> free_from(num_stands, 0);
  std::vector<std::size_t> stand(arrivals.size(), kNoStand);
  for (std::size_t i : order) {
    for (std::size_t j = 0; j < num_stands; ++j) {
      if (free_from[j] <= arrivals[i].arrival) {
        stand[i] = j;
        free_from[j] = arrivals[i].departure;
        break;
      }
    }
  }
  return stand;
}

EnvSizing size_ev(const EvConfig& cfg) {
  validate(cfg);
  const auto stand = assign_stands(cfg.arrivals, cfg.num_stands);
  std::vector<std::size_t> levels(cfg.num_stands, 0);
  for (std::size_t i = 0; i < stand.size(); ++i) {
    if (stand[i] == kNoStand) continue;
    levels[stand[i]] = std::max(levels[stand[i]], quanta(cfg.arrivals[i].energy, cfg.demand_quantum, "EV demand"));
  }
  EnvSizing out;
  out.num_states = 1;
  for (auto l : levels) out.num_states *= l + 1;
  const std::size_t mu = floor_quanta(cfg.rate_cap, cfg.demand_quantum);
  const std::size_t cap = floor_quanta(cfg.station_cap, cfg.demand_quantum);
  // Count rate vectors in [0, mu]^n with sum <= cap.
  std::vector<std::size_t> ways(cap + 1, 0);
  ways[0] = 1;
  for (std::size_t j = 0; j < cfg.num_stands; ++j) {
    std::vector<std::size_t> next(cap + 1, 0);
    for (std::size_t sum = 0; sum <= cap; ++sum) {
      for (std::size_t r = 0; r <= mu && sum + r <= cap; ++r) next[sum + r] += ways[sum];
    }
    ways = std::move(next);
  }
  out.num_actions = 0;
  for (auto w : ways) out.num_actions += w;
  out.horizon = cfg.horizon;
  const std::size_t rows = out.num_states * out.num_actions * (cfg.horizon + 1);
  out.max_nonzeros = rows;
  out.memory_bytes = rows * (sizeof(Transition) + 2 * sizeof(double) + sizeof(std::size_t) + sizeof(ActionId));
  return out;
}

EvEnv build_ev_mdp(const EvConfig& cfg) {
  const auto sizing = size_ev(cfg);
  check_budget(sizing.num_states, cfg.max_states, "EV");
  const std::size_t n = cfg.num_stands;
  const std::size_t T = cfg.horizon;
  const std::size_t mu = floor_quanta(cfg.rate_cap, cfg.demand_quantum);
  const std::size_t cap = floor_quanta(cfg.station_cap, cfg.demand_quantum);

  EvEnv env;
  env.config = cfg;
  env.stand_of = assign_stands(cfg.arrivals, n);
  std::vector<std::size_t> demand(cfg.arrivals.size());
  std::vector<std::size_t> levels(n, 0);
  env.occupant.assign(T + 2, std::vector<std::size_t>(n, kNoStand));
  for (std::size_t i = 0; i < cfg.arrivals.size(); ++i) {
    demand[i] = quanta(cfg.arrivals[i].energy, cfg.demand_quantum, "EV demand");
    const std::size_t j = env.stand_of[i];
    if (j == kNoStand) continue;
    levels[j] = std::max(levels[j], demand[i]);
    for (Time t = cfg.arrivals[i].arrival; t < cfg.arrivals[i].departure; ++t) env.occupant[t][j] = i;
  }
  env.codec = EvCodec(levels);

  std::vector<std::size_t> counter(n, 0);
  while (true) {
    std::size_t sum = 0;
    for (auto c : counter) sum += c;
    if (sum <= cap) env.actions.push_back(counter);
    std::size_t j = 0;
    while (j < n && counter[j] == mu) counter[j++] = 0;
    if (j == n) break;
    ++counter[j];
  }

  const std::size_t S = env.codec.num_states();
  const std::size_t A = env.actions.size();

  struct Step {
    StateId next;
    std::size_t delivered;
    bool valid;  // no charge beyond the remaining demand, every departing EV satisfied
  };
  auto step = [&](Time t, const std::vector<std::size_t>& rem, const std::vector<std::size_t>& act) {
    std::vector<std::size_t> out(n, 0);
    Step res{0, 0, true};
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = env.occupant[t][j];
      if (act[j] > rem[j]) res.valid = false;
      if (i == kNoStand) continue;
      const std::size_t c = std::min(act[j], rem[j]);
      res.delivered += c;
      out[j] = rem[j] - c;
      if (cfg.arrivals[i].departure == t + 1) {
        if (out[j] != 0) res.valid = false;
        out[j] = 0;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = env.occupant[t + 1][j];
      if (i != kNoStand && cfg.arrivals[i].arrival == t + 1) out[j] = demand[i];
    }
    res.next = env.codec.encode(out);
    return res;
  };

  std::vector<std::vector<Step>> steps(T + 1, std::vector<Step>(S * A));
  env.feasible.assign(T + 2, std::vector<bool>(S, false));
  env.feasible[T + 1].assign(S, true);
  for (Time t = T + 1; t-- > 0;) {
    for (StateId s = 0; s < S; ++s) {
      const auto rem = env.codec.decode(s);
      for (ActionId a = 0; a < A; ++a) {
        auto& st = steps[t][s * A + a];
        st = step(t, rem, env.actions[a]);
        if (st.valid && env.feasible[t + 1][st.next]) env.feasible[t][s] = true;
      }
    }
  }

  std::vector<std::size_t> initial(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = env.occupant[0][j];
    if (i != kNoStand) initial[j] = demand[i];
  }
  env.initial_state = env.codec.encode(initial);
  if (!env.feasible[0][env.initial_state]) {
    throw ConfigError("the station cannot meet every accepted EV's demand before its departure");
  }

  env.remap.assign(T + 1, std::vector<ActionId>(S * A));
  env.energy.assign(T + 1, std::vector<double>(S * A));
  std::vector<TransitionKernel> kernels;
  std::vector<RewardTable> rewards;
  kernels.reserve(T + 1);
  rewards.reserve(T + 1);
  for (Time t = 0; t <= T; ++t) {
    const double price = cfg.price(t);
    std::vector<std::vector<Transition>> rows(S * A);
    std::vector<double> r(S * A);
    for (StateId s = 0; s < S; ++s) {
      ActionId fallback = A;
      for (ActionId a = 0; a < A && fallback == A; ++a) {
        const auto& st = steps[t][s * A + a];
        if (st.valid && env.feasible[t + 1][st.next]) fallback = a;
      }
      for (ActionId a = 0; a < A; ++a) {
        const auto& own = steps[t][s * A + a];
        const bool ok = own.valid && env.feasible[t + 1][own.next];
        const ActionId applied = ok || fallback == A ? a : fallback;
        const auto& st = steps[t][s * A + applied];
        env.remap[t][s * A + a] = applied;
        const double energy = static_cast<double>(st.delivered) * cfg.demand_quantum;
        env.energy[t][s * A + a] = energy;
        rows[s * A + a] = {{st.next, 1.0}};
        r[s * A + a] = 1.0 - price * energy / (cfg.price_max * cfg.station_cap);
      }
    }
    kernels.emplace_back(S, A, std::move(rows));
    rewards.emplace_back(S, A, std::move(r));
  }
  env.mdp = NonStationaryMdp(std::move(kernels), std::move(rewards));
  return env;
}

std::vector<EvArrival> sample_ev_arrivals(const EvConfig& base, const EvArrivalModel& model, Rng& rng) {
  if (!(model.arrival_prob >= 0.0 && model.arrival_prob <= 1.0)) {
    throw ConfigError("arrival_prob must lie in [0, 1]");
  }
  if (model.min_stay < 1 || model.max_stay < model.min_stay) throw ConfigError("invalid stay range");
  if (model.max_demand < 1) throw ConfigError("max_demand must be at least 1");
  const std::size_t mu = floor_quanta(base.rate_cap, base.demand_quantum);
  std::bernoulli_distribution arrives(model.arrival_prob);
  std::uniform_int_distribution<Time> stay(model.min_stay, model.max_stay);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<EvArrival> out;
    for (Time t = 0; t < base.horizon; ++t) {
      if (!arrives(rng)) continue;
      const Time d = std::min<Time>(t + stay(rng), base.horizon + 1);
      const std::size_t most = std::min(model.max_demand, mu * (d - t));
      std::uniform_int_distribution<std::size_t> need(1, most);
      out.push_back({t, d, static_cast<double>(need(rng)) * base.demand_quantum});
    }
    EvConfig trial = base;
    trial.arrivals = out;
    try {
      build_ev_mdp(trial);
      return out;
    } catch (const ConfigError&) {
    }
  }
  throw ConfigError("could not draw a servable EV arrival list in 1000 attempts");
}

std::vector<double> ev_energy_profile(const EvEnv& env, const PolicySchedule& schedule) {
  schedule.validate(env.mdp);
  const std::size_t A = env.actions.size();
  std::vector<double> out(env.mdp.num_epochs(), 0.0);
  StateId s = env.initial_state;
  for (Time t = 0; t < env.mdp.num_epochs(); ++t) {
    const ActionId a = schedule.at(t, s);
    out[t] = env.energy[t][s * A + a];
    s = env.mdp.kernel(t).row(s, a).front().next;
  }
  return out;
}

double low_price_energy_fraction(const EvEnv& env, const std::vector<double>& energy) {
  double low = 0.0;
  double total = 0.0;
  for (Time t = 0; t < energy.size(); ++t) {
    total += energy[t];
    if (env.config.price(t) < env.config.low_price_threshold) low += energy[t];
  }
  return total > 0.0 ? low / total : 0.0;
}

// --- random ergodic ----------------------------------------------------------------

NonStationaryMdp random_ergodic_mdp(std::size_t num_states, std::size_t num_actions, Time T,
                                    double mixing_floor, std::uint64_t seed) {
  if (num_states == 0 || num_actions == 0) throw InputError("need at least one state and action");
  if (!(mixing_floor > 0.0 && mixing_floor <= 1.0)) throw InputError("mixing_floor must lie in (0, 1]");
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double uniform = 1.0 / static_cast<double>(num_states);
  std::vector<TransitionKernel> kernels;
  std::vector<RewardTable> rewards;
  kernels.reserve(T + 1);
  rewards.reserve(T + 1);
  std::vector<double> w(num_states);
  for (Time t = 0; t <= T; ++t) {
    std::vector<double> dense(num_states * num_actions * num_states);
    for (std::size_t row = 0; row < num_states * num_actions; ++row) {
      double total = 0.0;
      for (auto& x : w) {
        x = expo(rng);
        total += x;
      }
      double sum = 0.0;
      for (StateId n = 0; n < num_states; ++n) {
        const double p = (1.0 - mixing_floor) * w[n] / total + mixing_floor * uniform;
        dense[row * num_states + n] = p;
        sum += p;
      }
      for (StateId n = 0; n < num_states; ++n) dense[row * num_states + n] /= sum;
    }
    kernels.push_back(TransitionKernel::from_dense(num_states, num_actions, dense));
    std::vector<double> r(num_states * num_actions);
    for (auto& x : r) x = unit(rng);
    rewards.emplace_back(num_states, num_actions, std::move(r));
  }
  return NonStationaryMdp(std::move(kernels), std::move(rewards));
}

EnvSizing size_random(std::size_t num_states, std::size_t num_actions, Time T) {
  EnvSizing out;
  out.num_states = num_states;
  out.num_actions = num_actions;
  out.horizon = T;
  out.max_nonzeros = num_states * num_actions * num_states * (T + 1);
  out.memory_bytes = out.max_nonzeros * sizeof(Transition) +
                     num_states * num_actions * (T + 1) * (sizeof(double) + sizeof(std::size_t));
  return out;
}

}  // namespace mpdp
