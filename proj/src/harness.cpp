#include "mpdp/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mpdp/baselines.hpp"
#include "mpdp/serialize.hpp"

namespace mpdp {

using nlohmann::json;

namespace {

constexpr std::uint64_t kEnvStream = 0;
constexpr std::uint64_t kTrajectoryStream = 0x7472616a65637479ULL;

template <typename T>
T value_or(const json& block, const char* key, T fallback) {
  return block.contains(key) ? block.at(key).get<T>() : fallback;
}

QueueConfig queue_config(const json& env) {
  QueueConfig cfg;
  cfg.service_rates = value_or(env, "service_rates", cfg.service_rates);
  cfg.queue_cap = value_or<std::size_t>(env, "queue_cap", cfg.queue_cap);
  cfg.horizon = value_or<Time>(env, "horizon", cfg.horizon);
  cfg.max_states = value_or<std::size_t>(env, "max_states", cfg.max_states);
  const json arrival = env.value("arrival", json::object());
  cfg.arrival_rate = sinusoid_rate(value_or(arrival, "min", 10.0), value_or(arrival, "max", 100.0),
                                   value_or(arrival, "period", 50.0), value_or(arrival, "phase", 0.0));
  return cfg;
}

EvConfig ev_config(const json& env) {
  EvConfig cfg;
  cfg.num_stands = value_or<std::size_t>(env, "num_stands", cfg.num_stands);
  cfg.rate_cap = value_or(env, "rate_cap", cfg.rate_cap);
  cfg.station_cap = value_or(env, "station_cap", cfg.station_cap);
  cfg.demand_quantum = value_or(env, "demand_quantum", cfg.demand_quantum);
  cfg.horizon = value_or<Time>(env, "horizon", cfg.horizon);
  cfg.max_states = value_or<std::size_t>(env, "max_states", cfg.max_states);
  cfg.low_price_threshold = value_or(env, "low_price_threshold", cfg.low_price_threshold);
  const json price = env.value("price", json::object());
  const double lo = value_or(price, "low", 2.0);
  const double hi = value_or(price, "high", 18.0);
  cfg.price_max = hi;
  cfg.price = square_wave_price(lo, hi, value_or(price, "period", 24.0), value_or(price, "sharpness", 3.0),
                                value_or(price, "phase", 0.0));
  if (env.contains("arrivals")) {
    for (const auto& a : env.at("arrivals")) {
      cfg.arrivals.push_back({a.at("arrival").get<Time>(), a.at("departure").get<Time>(),
                              a.at("energy").get<double>()});
    }
  }
  return cfg;
}

EvArrivalModel arrival_model(const json& env) {
  EvArrivalModel model;
  const json m = env.value("arrival_model", json::object());
  model.arrival_prob = value_or(m, "arrival_prob", model.arrival_prob);
  model.min_stay = value_or<Time>(m, "min_stay", model.min_stay);
  model.max_stay = value_or<Time>(m, "max_stay", model.max_stay);
  model.max_demand = value_or<std::size_t>(m, "max_demand", model.max_demand);
  return model;
}

std::string env_type(const ExperimentConfig& cfg) { return cfg.env.at("type").get<std::string>(); }

std::size_t counterexample_k(const ExperimentConfig& cfg) {
  return value_or<std::size_t>(cfg.env, "k", cfg.planner.k);
}

StateId initial_state(const json& env, StateId fallback, std::size_t num_states) {
  const StateId s = value_or<StateId>(env, "initial_state", fallback);
  if (s >= num_states) throw ConfigError("env.initial_state " + std::to_string(s) + " out of range");
  return s;
}

// Wraps json type errors from the env block as ConfigError.
template <typename F>
auto config_guard(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("env block: ") + e.what());
  }
}

ErrorProfile broadcast_profile(const ForecastSpec& spec, std::size_t length, bool pad) {
  auto expand = [&](const std::vector<double>& xs, const char* what) {
    if (xs.size() == 1) return std::vector<double>(length, xs.front());
    if (xs.size() < length && !pad) {
      throw ConfigError(std::string("forecast.") + what + " lists " + std::to_string(xs.size()) +
                        " lookaheads but " + std::to_string(length) + " are needed");
    }
    std::vector<double> out(xs.begin(), xs.begin() + std::min(xs.size(), length));
    out.resize(length, xs.back());
    return out;
  };
  return {expand(spec.eps, "eps"), expand(spec.delta, "delta")};
}

std::unique_ptr<ForecastProvider> make_provider(const ExperimentConfig& cfg, const PreparedEnv& env) {
  switch (cfg.forecast.kind) {
    case ForecastKind::exact:
      return std::make_unique<ExactForecastProvider>();
    case ForecastKind::perturbed:
      return std::make_unique<PerturbedForecastProvider>(broadcast_profile(cfg.forecast, cfg.planner.k + 1, false));
    case ForecastKind::parametric:
      if (!env.queueing) throw ConfigError("parametric forecasts need a queueing env");
      return std::make_unique<ParametricForecastProvider>(env.queueing->parametric_model(),
                                                          NoiseSchedule{cfg.forecast.base, cfg.forecast.growth});
  }
  throw ConfigError("unknown forecast kind");
}

bool planner_deterministic(const ExperimentConfig& cfg) {
  switch (cfg.planner.kind) {
    case PlannerKind::optimal: return true;
    case PlannerKind::baseline: return cfg.planner.baseline.kind != BaselineKind::random;
    case PlannerKind::mpdp:
      if (cfg.forecast.kind == ForecastKind::exact) return true;
      if (cfg.forecast.kind == ForecastKind::parametric) {
        return cfg.forecast.base == 0.0 && cfg.forecast.growth == 0.0;
      }
      for (double x : cfg.forecast.eps) {
        if (x != 0.0) return false;
      }
      for (double x : cfg.forecast.delta) {
        if (x != 0.0) return false;
      }
      return true;
  }
  return false;
}

bool use_exact(const ExperimentConfig& cfg, const NonStationaryMdp& mdp) {
  switch (cfg.evaluation) {
    case EvaluationMode::exact: return true;
    case EvaluationMode::monte_carlo: return false;
    case EvaluationMode::automatic: return mdp.num_states() * mdp.num_epochs() <= cfg.exact_budget;
  }
  return true;
}

std::optional<double> attached_bound(const ExperimentConfig& cfg, const PreparedEnv& env) {
  if (!cfg.bound || !env.certificate || !env.diameter) return std::nullopt;
  if (cfg.planner.kind != PlannerKind::mpdp || cfg.forecast.kind == ForecastKind::parametric) {
    return std::nullopt;
  }
  const std::size_t k = cfg.planner.k;
  const std::size_t J = env.certificate->J;
  const std::size_t length = regret_bound_profile_length(k, J);
  const ErrorProfile profile = cfg.forecast.kind == ForecastKind::exact
                                   ? ErrorProfile::zeros(length)
                                   : broadcast_profile(cfg.forecast, length, true);
  return regret_bound(static_cast<double>(env.mdp.horizon()), k, J, env.certificate->gamma, env.diameter->D,
                      profile.eps, profile.delta)
      .total;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

bool env_is_random(const ExperimentConfig& cfg) {
  const auto type = env_type(cfg);
  if (type == "counterexample") return true;
  if (type == "random") return !cfg.env.contains("seed");
  if (type == "ev") return !cfg.env.contains("arrivals");
  return false;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t sweep_index, std::size_t trial) {
  return derive_seed(master, 1 + sweep_index, trial);
}

std::uint64_t env_seed(std::uint64_t master, std::size_t trial) { return derive_seed(master, kEnvStream, trial); }

std::shared_ptr<const PreparedEnv> prepare_env(const ExperimentConfig& cfg, std::uint64_t seed) {
  auto env = std::make_shared<PreparedEnv>();
  env->type = env_type(cfg);
  config_guard([&] {
    if (env->type == "queueing") {
      auto q = build_queueing_mdp(queue_config(cfg.env));
      env->mdp = q.mdp;
      env->initial_state = initial_state(cfg.env, q.initial_state, q.mdp.num_states());
      env->queueing = std::move(q);
    } else if (env->type == "ev") {
      EvConfig ev = ev_config(cfg.env);
      if (!cfg.env.contains("arrivals")) {
        Rng rng = make_rng(seed, 0);
        ev.arrivals = sample_ev_arrivals(ev, arrival_model(cfg.env), rng);
      }
      auto built = build_ev_mdp(ev);
      env->mdp = built.mdp;
      env->initial_state = built.initial_state;
      env->ev = std::move(built);
    } else if (env->type == "random") {
      const std::uint64_t s = cfg.env.contains("seed") ? cfg.env.at("seed").get<std::uint64_t>() : seed;
      env->mdp = random_ergodic_mdp(value_or<std::size_t>(cfg.env, "num_states", 4),
                                    value_or<std::size_t>(cfg.env, "num_actions", 2),
                                    value_or<Time>(cfg.env, "horizon", 10), value_or(cfg.env, "mixing_floor", 0.3), s);
      env->initial_state = initial_state(cfg.env, 0, env->mdp.num_states());
    } else if (env->type == "counterexample") {
      Rng rng = make_rng(seed, 0);
      auto ce = counterexample_mdp(counterexample_k(cfg), value_or<Time>(cfg.env, "horizon", 60), rng);
      env->mdp = std::move(ce.mdp);
      env->initial_state = ce.start;
    } else if (env->type == "file") {
      auto path = std::filesystem::path(cfg.env.at("path").get<std::string>());
      if (path.is_relative()) path = cfg.base_dir / path;
      env->mdp = load_mdp(path);
      env->initial_state = initial_state(cfg.env, 0, env->mdp.num_states());
    } else {
      throw ConfigError("unknown env type " + env->type);
    }
    return 0;
  });
  env->oracle = solve_optimal(env->mdp);
  if (cfg.bound) {
    env->certificate = contraction_coefficient(env->mdp, cfg.bound->J, cfg.bound->mode);
    env->diameter = diameter(env->mdp, env->oracle.v_star, cfg.bound->cutoff);
  }
  return env;
}

EnvSizing describe_env(const ExperimentConfig& cfg) {
  const auto type = env_type(cfg);
  return config_guard([&] {
    if (type == "queueing") return size_queueing(queue_config(cfg.env));
    if (type == "ev") {
      EvConfig ev = ev_config(cfg.env);
      if (!cfg.env.contains("arrivals")) {
        // Worst case: every stand can hold the largest demand.
        const auto model = arrival_model(cfg.env);
        ev.arrivals.clear();
        for (std::size_t j = 0; j < ev.num_stands; ++j) {
          const Time d = std::min<Time>(model.max_stay, ev.horizon + 1);
          const std::size_t mu = static_cast<std::size_t>(std::floor(ev.rate_cap / ev.demand_quantum + 1e-9));
          ev.arrivals.push_back({0, d, static_cast<double>(std::min(model.max_demand, mu * d)) * ev.demand_quantum});
        }
      }
      return size_ev(ev);
    }
    if (type == "random") {
      return size_random(value_or<std::size_t>(cfg.env, "num_states", 4),
                         value_or<std::size_t>(cfg.env, "num_actions", 2), value_or<Time>(cfg.env, "horizon", 10));
    }
    if (type == "counterexample") return size_random(3, 2, value_or<Time>(cfg.env, "horizon", 60));
    auto path = std::filesystem::path(cfg.env.at("path").get<std::string>());
    if (path.is_relative()) path = cfg.base_dir / path;
    const auto mdp = load_mdp(path);
    return size_random(mdp.num_states(), mdp.num_actions(), mdp.horizon());
  });
}

TrialRow run_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  const auto env = prepare_env(cfg, env_seed(cfg.seed, trial_index));
  return run_trial(cfg, *env, 0, trial_index, 0.0);
}

TrialRow run_trial(const ExperimentConfig& cfg, const PreparedEnv& env, std::size_t sweep_index,
                   std::size_t trial_index, double sweep_value) {
  const auto start = std::chrono::steady_clock::now();
  TrialRow row;
  row.trial = trial_index;
  row.sweep_value = sweep_value;
  row.seed = trial_seed(cfg.seed, sweep_index, trial_index);
  const auto& mdp = env.mdp;
  const StateId s0 = env.initial_state;
  row.optimal_value = env.oracle.v_star[0][s0];
  row.exact = use_exact(cfg, mdp);

  const std::uint64_t baseline_seed = derive_seed(row.seed, cfg.planner.baseline.seed);
  std::unique_ptr<ForecastProvider> provider;
  if (cfg.planner.kind == PlannerKind::mpdp) provider = make_provider(cfg, env);

  auto baseline = [&](Time t, StateId s) -> ActionId {
    switch (cfg.planner.baseline.kind) {
      case BaselineKind::fas: return fas_action(*env.queueing, s);
      case BaselineKind::rsrt: return rsrt_action(*env.queueing, s, cfg.planner.baseline.threshold);
      case BaselineKind::sllf: return sllf_action(*env.ev, s, t);
      case BaselineKind::random: return random_action(mdp.num_actions(), baseline_seed, t, s);
    }
    return 0;
  };

  if (row.exact) {
    PolicySchedule schedule;
    switch (cfg.planner.kind) {
      case PlannerKind::optimal: schedule = env.oracle.pi_star; break;
      case PlannerKind::mpdp: schedule = mpdp_schedule(mdp, *provider, cfg.planner.k, row.seed).schedule; break;
      case PlannerKind::baseline:
        schedule = PolicySchedule(mdp.num_epochs(), mdp.num_states());
        for (Time t = 0; t < mdp.num_epochs(); ++t) {
          for (StateId s = 0; s < mdp.num_states(); ++s) schedule.set(t, s, baseline(t, s));
        }
        break;
    }
    row.achieved_value = evaluate_policy_exact(mdp, schedule, s0);
    if (env.ev) row.energy = ev_energy_profile(*env.ev, schedule);
  } else {
    Rng trajectory = make_rng(row.seed, kTrajectoryStream);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StateId s = s0;
    double total = 0.0;
    if (env.ev) row.energy.assign(mdp.num_epochs(), 0.0);
    for (Time t = 0; t < mdp.num_epochs(); ++t) {
      ActionId a = 0;
      switch (cfg.planner.kind) {
        case PlannerKind::optimal: a = env.oracle.pi_star.at(t, s); break;
        case PlannerKind::baseline: a = baseline(t, s); break;
        case PlannerKind::mpdp: {
          Rng rng = make_rng(row.seed, t);
          a = mpdp_step(provider->forecast(mdp, t, cfg.planner.k, rng), s).action;
          break;
        }
      }
      total += mdp.reward(t)(s, a);
      if (env.ev) row.energy[t] = env.ev->energy[t][s * mdp.num_actions() + a];
      const auto next = mdp.kernel(t).row(s, a);
      double u = unit(trajectory);
      StateId chosen = next.back().next;
      for (const auto& tr : next) {
        if (u < tr.prob) {
          chosen = tr.next;
          break;
        }
        u -= tr.prob;
      }
      s = chosen;
    }
    row.achieved_value = total;
  }
  row.regret = row.optimal_value - row.achieved_value;
  row.bound = attached_bound(cfg, env);
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("MPDP_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RegretReport run_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  struct Point {
    ExperimentConfig cfg;
    double value;
    std::shared_ptr<const PreparedEnv> shared;  // null when the env changes per trial
    bool replicate;                             // every trial yields the same numbers
  };
  std::vector<Point> points;
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) points.push_back({with_sweep_value(cfg, v), v, nullptr, false});
  } else {
    points.push_back({cfg, 0.0, nullptr, false});
  }

  std::map<std::string, std::shared_ptr<const PreparedEnv>> cache;
  for (auto& p : points) {
    if (env_is_random(p.cfg)) continue;
    const std::string key = p.cfg.env.dump() + '|' + p.cfg.document.value("bound", json()).dump();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, prepare_env(p.cfg, env_seed(p.cfg.seed, 0))).first;
    p.shared = it->second;
    p.replicate = planner_deterministic(p.cfg) && use_exact(p.cfg, p.shared->mdp);
  }

  struct Job {
    std::size_t point;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::size_t n = points[p].replicate ? 1 : cfg.trials;
    for (std::size_t i = 0; i < n; ++i) jobs.push_back({p, i});
  }

  std::vector<TrialRow> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        const auto& p = points[jobs[j].point];
        auto env = p.shared ? p.shared : prepare_env(p.cfg, env_seed(p.cfg.seed, jobs[j].trial));
        results[j] = run_trial(p.cfg, *env, jobs[j].point, jobs[j].trial, p.value);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
      }
    }
  };
  const std::size_t workers = std::min(options.workers ? options.workers : default_workers(), jobs.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  RegretReport report;
  std::size_t j = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (points[p].replicate) {
      const TrialRow first = results[j++];
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        TrialRow row = first;
        row.trial = i;
        row.seed = trial_seed(cfg.seed, p, i);
        report.rows.push_back(std::move(row));
      }
    } else {
      for (std::size_t i = 0; i < cfg.trials; ++i) report.rows.push_back(std::move(results[j++]));
    }
  }
  report.summary = summarize(report.rows);
  if (env_type(cfg) == "ev") {
    const auto price = ev_config(cfg.env).price;
    const Time T = value_or<Time>(cfg.env, "horizon", 48);
    for (Time t = 0; t <= T; ++t) report.price.push_back(price(t));
  }
  return report;
}

std::vector<SweepSummary> summarize(const std::vector<TrialRow>& rows) {
  std::vector<SweepSummary> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].sweep_value == rows[i].sweep_value) ++j;
    SweepSummary s;
    s.sweep_value = rows[i].sweep_value;
    s.trials = j - i;
    // Offsets from the first value keep the mean of identical values exact.
    const double first = rows[i].regret;
    double sum = 0.0;
    double bound_sum = 0.0;
    std::size_t bounds = 0;
    for (std::size_t r = i; r < j; ++r) {
      sum += rows[r].regret - first;
      if (rows[r].bound) {
        bound_sum += *rows[r].bound;
        ++bounds;
      }
    }
    s.mean = first + sum / static_cast<double>(s.trials);
    double sq = 0.0;
    for (std::size_t r = i; r < j; ++r) sq += (rows[r].regret - s.mean) * (rows[r].regret - s.mean);
    s.std = s.trials > 1 ? std::sqrt(sq / static_cast<double>(s.trials - 1)) : 0.0;
    const double half = 1.96 * s.std / std::sqrt(static_cast<double>(s.trials));
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    if (bounds > 0) s.bound = bound_sum / static_cast<double>(bounds);
    out.push_back(s);
    i = j;
  }
  return out;
}

std::filesystem::path summary_path(const std::filesystem::path& path) {
  auto out = path;
  out.replace_filename(path.stem().string() + ".summary.csv");
  return out;
}

std::filesystem::path energy_path(const std::filesystem::path& path) {
  auto out = path;
  out.replace_filename(path.stem().string() + ".energy.csv");
  return out;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void emit_csv(const RegretReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "trial,sweep_value,regret,optimal_value,achieved_value,bound,seed\n";
  for (const auto& r : report.rows) {
    out << r.trial << ',' << format_number(r.sweep_value) << ',' << format_number(r.regret) << ','
        << format_number(r.optimal_value) << ',' << format_number(r.achieved_value) << ','
        << (r.bound ? format_number(*r.bound) : "") << ',' << r.seed << '\n';
  }
  finish(out, path);

  const auto spath = summary_path(path);
  auto sum = open_output(spath);
  sum << "sweep_value,trials,mean_regret,std_regret,ci95_low,ci95_high,bound\n";
  for (const auto& s : report.summary) {
    sum << format_number(s.sweep_value) << ',' << s.trials << ',' << format_number(s.mean) << ','
        << format_number(s.std) << ',' << format_number(s.ci_low) << ',' << format_number(s.ci_high) << ','
        << (s.bound ? format_number(*s.bound) : "") << '\n';
  }
  finish(sum, spath);
}

std::vector<TrialRow> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "trial,sweep_value,regret,optimal_value,achieved_value,bound,seed") {
    throw InputError(path.string() + ": unexpected header");
  }
  std::vector<TrialRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 7 fields");
    try {
      TrialRow r;
      r.trial = std::stoull(f[0]);
      r.sweep_value = std::stod(f[1]);
      r.regret = std::stod(f[2]);
      r.optimal_value = std::stod(f[3]);
      r.achieved_value = std::stod(f[4]);
      if (!f[5].empty()) r.bound = std::stod(f[5]);
      r.seed = std::stoull(f[6]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

void emit_energy_csv(const RegretReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "sweep_value,t,price,mean_energy\n";
  std::size_t i = 0;
  while (i < report.rows.size()) {
    std::size_t j = i;
    while (j < report.rows.size() && report.rows[j].sweep_value == report.rows[i].sweep_value) ++j;
    const std::size_t epochs = report.rows[i].energy.size();
    for (Time t = 0; t < epochs; ++t) {
      double sum = 0.0;
      for (std::size_t r = i; r < j; ++r) sum += report.rows[r].energy.at(t);
      out << format_number(report.rows[i].sweep_value) << ',' << t << ','
          << format_number(t < report.price.size() ? report.price[t] : 0.0) << ','
          << format_number(sum / static_cast<double>(j - i)) << '\n';
    }
    i = j;
  }
  finish(out, path);
}

}  // namespace mpdp
