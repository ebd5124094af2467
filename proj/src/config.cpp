#include "mpdp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace mpdp {

using nlohmann::json;

namespace {

void allow_keys(const json& block, const std::string& where, std::initializer_list<const char*> keys) {
  if (!block.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : block.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
T get_or(const json& block, const char* key, const std::string& where, T fallback) {
  if (!block.contains(key)) return fallback;
  try {
    return block.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

template <typename T>
T require(const json& block, const char* key, const std::string& where) {
  if (!block.contains(key)) throw ConfigError("missing key '" + where + "." + key + "'");
  return get_or<T>(block, key, where, T{});
}

std::size_t get_count(const json& block, const char* key, const std::string& where, std::size_t fallback) {
  if (!block.contains(key)) return fallback;
  const auto& v = block.at(key);
  if (v.is_number_unsigned()) return static_cast<std::size_t>(v.get<std::uint64_t>());
  if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())) {
    throw ConfigError("'" + where + "." + key + "' must be a whole number");
  }
  const double x = v.get<double>();
  if (x < 0) throw ConfigError("'" + where + "." + key + "' must be non-negative");
  return static_cast<std::size_t>(x);
}

std::vector<double> number_or_list(const json& block, const char* key, const std::string& where) {
  if (!block.contains(key)) return {0.0};
  const auto& v = block.at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError("'" + where + "." + key + "' must hold numbers");
      out.push_back(x.get<double>());
    }
  } else {
    throw ConfigError("'" + where + "." + key + "' must be a number or a non-empty list");
  }
  for (double x : out) {
    if (!(x >= 0.0)) throw ConfigError("'" + where + "." + key + "' entries must be non-negative");
  }
  return out;
}

void check_env(const json& env) {
  const std::string type = require<std::string>(env, "type", "env");
  if (type == "queueing") {
    allow_keys(env, "env", {"type", "service_rates", "queue_cap", "horizon", "arrival", "max_states",
                            "initial_state"});
    if (env.contains("arrival")) allow_keys(env.at("arrival"), "env.arrival", {"min", "max", "period", "phase"});
  } else if (type == "ev") {
    allow_keys(env, "env", {"type", "num_stands", "rate_cap", "station_cap", "demand_quantum", "horizon",
                            "price", "low_price_threshold", "arrivals", "arrival_model", "max_states"});
    if (env.contains("price")) {
      allow_keys(env.at("price"), "env.price", {"low", "high", "period", "sharpness", "phase"});
    }
    if (env.contains("arrival_model")) {
      allow_keys(env.at("arrival_model"), "env.arrival_model",
                 {"arrival_prob", "min_stay", "max_stay", "max_demand"});
    }
    if (env.contains("arrivals") && env.contains("arrival_model")) {
      throw ConfigError("env.arrivals and env.arrival_model are mutually exclusive");
    }
  } else if (type == "random") {
    allow_keys(env, "env", {"type", "num_states", "num_actions", "horizon", "mixing_floor", "seed",
                            "initial_state"});
  } else if (type == "counterexample") {
    allow_keys(env, "env", {"type", "horizon", "k"});
  } else if (type == "file") {
    allow_keys(env, "env", {"type", "path", "initial_state"});
    require<std::string>(env, "path", "env");
  } else {
    throw ConfigError("unknown env.type '" + type + "' (expected queueing, ev, random, counterexample or file)");
  }
}

}  // namespace

const char* to_string(ForecastKind kind) {
  switch (kind) {
    case ForecastKind::exact: return "exact";
    case ForecastKind::perturbed: return "perturbed";
    case ForecastKind::parametric: return "parametric";
  }
  return "?";
}

const char* to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::mpdp: return "mpdp";
    case PlannerKind::baseline: return "baseline";
    case PlannerKind::optimal: return "optimal";
  }
  return "?";
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  allow_keys(doc, "config", {"name", "seed", "trials", "output", "evaluation", "exact_budget", "env",
                             "forecast", "planner", "sweep", "bound"});
  ExperimentConfig cfg;
  cfg.document = doc;
  cfg.base_dir = base_dir;
  cfg.name = get_or<std::string>(doc, "name", "config", cfg.name);
  cfg.seed = get_count(doc, "seed", "config", 0);
  cfg.trials = get_count(doc, "trials", "config", 1);
  if (cfg.trials < 1) throw ConfigError("config.trials must be at least 1");
  cfg.output = get_or<std::string>(doc, "output", "config", cfg.name + ".csv");
  cfg.exact_budget = get_count(doc, "exact_budget", "config", cfg.exact_budget);

  const auto evaluation = get_or<std::string>(doc, "evaluation", "config", "auto");
  if (evaluation == "auto") cfg.evaluation = EvaluationMode::automatic;
  else if (evaluation == "exact") cfg.evaluation = EvaluationMode::exact;
  else if (evaluation == "monte_carlo") cfg.evaluation = EvaluationMode::monte_carlo;
  else throw ConfigError("config.evaluation must be auto, exact or monte_carlo");

  if (!doc.contains("env")) throw ConfigError("missing key 'config.env'");
  cfg.env = doc.at("env");
  check_env(cfg.env);
  const std::string env_type = cfg.env.at("type").get<std::string>();

  const json forecast = doc.value("forecast", json{{"type", "exact"}});
  const auto ftype = require<std::string>(forecast, "type", "forecast");
  if (ftype == "exact") {
    allow_keys(forecast, "forecast", {"type"});
  } else if (ftype == "perturbed") {
    allow_keys(forecast, "forecast", {"type", "eps", "delta"});
    cfg.forecast.kind = ForecastKind::perturbed;
    cfg.forecast.eps = number_or_list(forecast, "eps", "forecast");
    cfg.forecast.delta = number_or_list(forecast, "delta", "forecast");
    for (double d : cfg.forecast.delta) {
      if (d > 1.0) throw ConfigError("forecast.delta entries must not exceed 1");
    }
  } else if (ftype == "parametric") {
    allow_keys(forecast, "forecast", {"type", "base", "growth"});
    cfg.forecast.kind = ForecastKind::parametric;
    cfg.forecast.base = get_or<double>(forecast, "base", "forecast", 0.0);
    cfg.forecast.growth = get_or<double>(forecast, "growth", "forecast", 0.0);
    if (!(cfg.forecast.base >= 0.0) || !(cfg.forecast.growth >= 0.0)) {
      throw ConfigError("forecast.base and forecast.growth must be non-negative");
    }
    if (env_type != "queueing") throw ConfigError("parametric forecasts need a queueing env");
  } else {
    throw ConfigError("unknown forecast.type '" + ftype + "'");
  }

  if (!doc.contains("planner")) throw ConfigError("missing key 'config.planner'");
  const json& planner = doc.at("planner");
  const auto ptype = require<std::string>(planner, "type", "planner");
  if (ptype == "mpdp") {
    allow_keys(planner, "planner", {"type", "k"});
    cfg.planner.kind = PlannerKind::mpdp;
    cfg.planner.k = get_count(planner, "k", "planner", 0);
  } else if (ptype == "baseline") {
    allow_keys(planner, "planner", {"type", "kind", "threshold", "seed"});
    cfg.planner.kind = PlannerKind::baseline;
    cfg.planner.baseline.kind = parse_baseline_kind(require<std::string>(planner, "kind", "planner"));
    cfg.planner.baseline.threshold = get_count(planner, "threshold", "planner", kDefaultRsrtThreshold);
    cfg.planner.baseline.seed = get_count(planner, "seed", "planner", 0);
    const auto kind = cfg.planner.baseline.kind;
    if ((kind == BaselineKind::fas || kind == BaselineKind::rsrt) && env_type != "queueing") {
      throw ConfigError(std::string("baseline ") + to_string(kind) + " needs a queueing env");
    }
    if (kind == BaselineKind::sllf && env_type != "ev") throw ConfigError("baseline sllf needs an ev env");
  } else if (ptype == "optimal") {
    allow_keys(planner, "planner", {"type"});
    cfg.planner.kind = PlannerKind::optimal;
  } else {
    throw ConfigError("unknown planner.type '" + ptype + "'");
  }

  if (doc.contains("sweep")) {
    const json& sweep = doc.at("sweep");
    allow_keys(sweep, "sweep", {"parameter", "values"});
    SweepSpec spec;
    spec.parameter = require<std::string>(sweep, "parameter", "sweep");
    if (!sweep.contains("values") || !sweep.at("values").is_array() || sweep.at("values").empty()) {
      throw ConfigError("sweep.values must be a non-empty list");
    }
    for (const auto& v : sweep.at("values")) {
      if (!v.is_number()) throw ConfigError("sweep.values must hold numbers");
      spec.values.push_back(v.get<double>());
    }
    if (spec.parameter.rfind("sweep", 0) == 0) throw ConfigError("sweep.parameter cannot point into the sweep");
    cfg.sweep = spec;
  }

  if (doc.contains("bound")) {
    const json& bound = doc.at("bound");
    allow_keys(bound, "bound", {"J", "method", "samples", "budget", "cutoff"});
    BoundSpec spec;
    spec.J = get_count(bound, "J", "bound", 1);
    if (spec.J < 1) throw ConfigError("bound.J must be at least 1");
    const auto method = get_or<std::string>(bound, "method", "bound", "exhaustive");
    if (method == "exhaustive") {
      spec.mode = ContractionMode::exhaustive(get_count(bound, "budget", "bound", 1'000'000));
    } else if (method == "sampled") {
      spec.mode = ContractionMode::sampled(get_count(bound, "samples", "bound", 1000), cfg.seed);
    } else {
      throw ConfigError("bound.method must be exhaustive or sampled");
    }
    spec.cutoff = get_count(bound, "cutoff", "bound", 0);
    cfg.bound = spec;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

void set_path(json& doc, const std::string& dotted, const json& value) {
  if (dotted.empty()) throw ConfigError("empty config path");
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("malformed config path '" + dotted + "'");
    if (!node->is_object()) throw ConfigError("config path '" + dotted + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig with_sweep_value(const ExperimentConfig& cfg, double value) {
  if (!cfg.sweep) throw ConfigError("config has no sweep");
  json doc = cfg.document;
  doc.erase("sweep");
  const double whole = std::floor(value);
  if (whole == value && std::abs(value) < 9e15) {
    set_path(doc, cfg.sweep->parameter, static_cast<std::int64_t>(whole));
  } else {
    set_path(doc, cfg.sweep->parameter, value);
  }
  return parse_config(doc, cfg.base_dir);
}

}  // namespace mpdp
