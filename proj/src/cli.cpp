#include "mpdp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mpdp/analysis.hpp"
#include "mpdp/harness.hpp"

namespace mpdp {

namespace {

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string("--") + flag + ": '" + cell + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(std::string("--") + flag + " needs at least one value");
  return out;
}

ExperimentConfig load_with_seed(const std::string& path, const std::optional<std::uint64_t>& seed) {
  ExperimentConfig cfg = load_config(path);
  if (seed) {
    cfg.document["seed"] = *seed;
    cfg = parse_config(cfg.document, cfg.base_dir);
  }
  return cfg;
}

std::string human_bytes(std::size_t bytes) {
  const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
  double x = static_cast<double>(bytes);
  int u = 0;
  while (x >= 1024.0 && u < 4) {
    x /= 1024.0;
    ++u;
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(u == 0 ? 0 : 1) << x << ' ' << units[u];
  return os.str();
}

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed, std::size_t workers,
            const std::string& output, std::ostream& out) {
  ExperimentConfig cfg = load_with_seed(path, seed);
  const std::filesystem::path target = output.empty() ? cfg.base_dir / cfg.output : std::filesystem::path(output);
  const auto report = run_sweep(cfg, RunOptions{workers});
  emit_csv(report, target);
  out << cfg.name << ": " << report.rows.size() << " trials -> " << target.string() << '\n';
  if (!report.price.empty()) {
    emit_energy_csv(report, energy_path(target));
    out << "energy profile -> " << energy_path(target).string() << '\n';
  }
  out << std::setw(12) << "sweep_value" << std::setw(8) << "trials" << std::setw(14) << "mean_regret"
      << std::setw(12) << "std" << std::setw(14) << "bound" << '\n';
  for (const auto& s : report.summary) {
    out << std::setw(12) << s.sweep_value << std::setw(8) << s.trials << std::setw(14) << s.mean
        << std::setw(12) << s.std << std::setw(14) << (s.bound ? std::to_string(*s.bound) : "-") << '\n';
  }
  return 0;
}

int cmd_analyze(const std::string& path, const std::optional<std::uint64_t>& seed, std::size_t J,
                const std::string& method, std::uint64_t samples, std::size_t cutoff, std::size_t checks,
                std::ostream& out) {
  ExperimentConfig cfg = load_with_seed(path, seed);
  cfg.bound.reset();
  const auto env = prepare_env(cfg, env_seed(cfg.seed, 0));
  const auto& mdp = env->mdp;
  out << "env " << env->type << ": |S| = " << mdp.num_states() << ", |A| = " << mdp.num_actions()
      << ", T = " << mdp.horizon() << '\n';
  out << "V*_0(s0) = " << env->oracle.v_star[0][env->initial_state] << '\n';

  const auto mode = method == "sampled" ? ContractionMode::sampled(samples, cfg.seed) : ContractionMode::exhaustive();
  const auto cert = contraction_coefficient(mdp, J, mode);
  out << "gamma = " << cert.gamma << " (J = " << cert.J << ", " << to_string(cert.method) << ", "
      << cert.policy_pairs_examined << " policy pairs over " << cert.windows << " windows)\n";
  const auto check = verify_contraction(mdp, cert, checks, cfg.seed);
  out << "span contraction check: " << check.checks << " checks, max ratio " << check.max_ratio << ", "
      << (check.ok ? "ok" : check.message) << '\n';

  const auto d = diameter(mdp, env->oracle.v_star, cutoff);
  out << "D = " << d.D << " (cutoff " << d.cutoff << (d.truncated ? ", truncated by the horizon" : "") << ")\n";
  const auto span_check = verify_diameter_bound(env->oracle.v_star, d.D);
  out << "max span(V*_t) = " << span_check.max_span << " at t = " << span_check.worst_time << ", "
      << (span_check.ok ? "within D" : span_check.message) << '\n';
  return check.ok && span_check.ok ? 0 : 1;
}

int cmd_bound(double T, std::size_t k, std::size_t J, double gamma, double D, const std::string& eps_text,
              const std::string& delta_text, std::ostream& out) {
  const std::size_t length = regret_bound_profile_length(k, J);
  auto expand = [&](const std::string& text, const char* flag) {
    auto xs = parse_list(text, flag);
    if (xs.size() == 1) xs.assign(length, xs.front());
    return xs;
  };
  const auto eps = expand(eps_text, "eps");
  const auto delta = expand(delta_text, "delta");
  const auto b = regret_bound(T, k, J, gamma, D, eps, delta);
  out << std::setprecision(12);
  out << "noise-free      T g^floor(k/J) D    " << b.noise_free_term << '\n';
  out << "reward error    2 T eps_0           " << b.eps0_term << '\n';
  out << "kernel error    2 T delta_0 D       " << b.delta0_term << '\n';
  out << "lookahead sum   4 T sum g^i B_i     " << b.geometric_term << '\n';
  out << "remainder       4 T g^floor(k/J) R  " << b.tail_term << '\n';
  out << "total                               " << b.total << '\n';
  return 0;
}

int cmd_describe(const std::string& path, std::ostream& out) {
  const ExperimentConfig cfg = load_config(path);
  const auto size = describe_env(cfg);
  out << "env " << cfg.env.at("type").get<std::string>() << '\n';
  out << "|S| = " << size.num_states << '\n';
  out << "|A| = " << size.num_actions << '\n';
  out << "T = " << size.horizon << '\n';
  out << "transitions <= " << size.max_nonzeros << '\n';
  out << "memory ~ " << human_bytes(size.memory_bytes) << '\n';
  if (env_is_random(cfg)) out << "(env is redrawn per trial; sizes are upper bounds)\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Receding-horizon planning experiments on non-stationary MDPs", "mpdp"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  std::string config;
  std::string output;

  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV results");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--workers", workers, "Worker threads (default: MPDP_WORKERS or all cores)");
  run->add_option("--output", output, "Override the output CSV path");

  std::size_t J = 1;
  std::string method = "exhaustive";
  std::uint64_t samples = 1000;
  std::size_t cutoff = 0;
  std::size_t checks = 200;
  auto* analyze = app.add_subcommand("analyze", "Contraction and diameter certificates for a config's env");
  analyze->add_option("config", config, "Experiment config (JSON)")->required();
  analyze->add_option("--seed", seed, "Override the config seed");
  analyze->add_option("--J", J, "Contraction window length")->check(CLI::PositiveNumber);
  analyze->add_option("--method", method, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  analyze->add_option("--samples", samples, "Policy pairs per window in sampled mode");
  analyze->add_option("--cutoff", cutoff, "Ignore diameter start times after T - cutoff");
  analyze->add_option("--checks", checks, "Random vector pairs for the span check");

  double T = 0.0;
  double gamma = 0.0;
  double D = 0.0;
  std::size_t k = 0;
  std::string eps = "0";
  std::string delta = "0";
  auto* bound = app.add_subcommand("bound", "Evaluate the regret bound and print its terms");
  bound->add_option("--T", T, "Horizon")->required();
  bound->add_option("--k", k, "Prediction window")->required();
  bound->add_option("--J", J, "Contraction window length")->check(CLI::PositiveNumber);
  bound->add_option("--gamma", gamma, "Contraction coefficient")->required()->check(CLI::Range(0.0, 1.0));
  bound->add_option("--D", D, "Diameter")->required();
  bound->add_option("--eps", eps, "Reward errors eps_0,eps_1,... (one value broadcasts)");
  bound->add_option("--delta", delta, "Kernel errors delta_0,delta_1,... (one value broadcasts)");
  bound->add_option("--seed", seed, "Accepted for uniformity; unused");

  auto* describe = app.add_subcommand("describe", "Print env sizes without building it");
  describe->add_option("config", config, "Experiment config (JSON)")->required();
  describe->add_option("--seed", seed, "Accepted for uniformity; unused");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mpdp: " << e.what() << '\n';
    err << "run 'mpdp --help' for usage\n";
    return 2;
  }

  try {
    if (*run) return cmd_run(config, seed, workers, output, out);
    if (*analyze) return cmd_analyze(config, seed, J, method, samples, cutoff, checks, out);
    if (*bound) return cmd_bound(T, k, J, gamma, D, eps, delta, out);
    if (*describe) return cmd_describe(config, out);
  } catch (const ConfigError& e) {
    err << "mpdp: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "mpdp: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace mpdp
