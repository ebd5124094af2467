#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mpdp/analysis.hpp"
#include "mpdp/cli.hpp"
#include "mpdp/environments.hpp"
#include "mpdp/errors.hpp"
#include "mpdp/harness.hpp"
#include "mpdp/planner.hpp"
#include "mpdp/serialize.hpp"

namespace py = pybind11;
using namespace mpdp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

NonStationaryMdp mdp_from_arrays(const Array& kernels, const Array& rewards) {
  if (kernels.ndim() != 4 || rewards.ndim() != 3) {
    throw DimensionError("expected kernels[t, s, a, s'] and rewards[t, s, a]");
  }
  const std::size_t E = kernels.shape(0), S = kernels.shape(1), A = kernels.shape(2);
  if (kernels.shape(3) != static_cast<py::ssize_t>(S) || rewards.shape(0) != static_cast<py::ssize_t>(E) ||
      rewards.shape(1) != static_cast<py::ssize_t>(S) || rewards.shape(2) != static_cast<py::ssize_t>(A)) {
    throw DimensionError("kernel and reward shapes disagree");
  }
  std::vector<TransitionKernel> ks;
  std::vector<RewardTable> rs;
  const double* kp = kernels.data();
  const double* rp = rewards.data();
  for (std::size_t t = 0; t < E; ++t) {
    ks.push_back(TransitionKernel::from_dense(S, A, std::span<const double>(kp + t * S * A * S, S * A * S)));
    rs.emplace_back(S, A, std::vector<double>(rp + t * S * A, rp + (t + 1) * S * A));
  }
  return NonStationaryMdp(std::move(ks), std::move(rs));
}

py::array_t<double> kernels_array(const NonStationaryMdp& mdp) {
  const std::size_t E = mdp.num_epochs(), S = mdp.num_states(), A = mdp.num_actions();
  py::array_t<double> out({E, S, A, S});
  auto* p = out.mutable_data();
  for (Time t = 0; t < E; ++t) {
    const auto dense = mdp.kernel(t).to_dense();
    std::copy(dense.begin(), dense.end(), p + t * S * A * S);
  }
  return out;
}

py::array_t<double> rewards_array(const NonStationaryMdp& mdp) {
  const std::size_t E = mdp.num_epochs(), S = mdp.num_states(), A = mdp.num_actions();
  py::array_t<double> out({E, S, A});
  auto* p = out.mutable_data();
  for (Time t = 0; t < E; ++t)
    for (StateId s = 0; s < S; ++s)
      for (ActionId a = 0; a < A; ++a) p[(t * S + s) * A + a] = mdp.reward(t)(s, a);
  return out;
}

py::array_t<double> values_array(const std::vector<ValueVector>& v) {
  const std::size_t n = v.empty() ? 0 : v.front().size();
  py::array_t<double> out({v.size(), n});
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < v.size(); ++i) std::copy(v[i].begin(), v[i].end(), p + i * n);
  return out;
}

py::array_t<std::int64_t> schedule_array(const PolicySchedule& pi) {
  py::array_t<std::int64_t> out({pi.num_epochs(), pi.num_states()});
  auto* p = out.mutable_data();
  for (Time t = 0; t < pi.num_epochs(); ++t)
    for (StateId s = 0; s < pi.num_states(); ++s) p[t * pi.num_states() + s] = pi.at(t, s);
  return out;
}

PolicySchedule schedule_from(const NonStationaryMdp& mdp,
                             const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != static_cast<py::ssize_t>(mdp.num_epochs()) ||
      a.shape(1) != static_cast<py::ssize_t>(mdp.num_states())) {
    throw DimensionError("schedule must have shape (T + 1, |S|)");
  }
  PolicySchedule pi(mdp.num_epochs(), mdp.num_states());
  for (Time t = 0; t < mdp.num_epochs(); ++t)
    for (StateId s = 0; s < mdp.num_states(); ++s) {
      const auto v = a.at(t, s);
      if (v < 0) throw IndexError("negative action in schedule");
      pi.set(t, s, static_cast<ActionId>(v));
    }
  pi.validate(mdp);
  return pi;
}

py::dict row_dict(const TrialRow& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["sweep_value"] = r.sweep_value;
  d["regret"] = r.regret;
  d["optimal_value"] = r.optimal_value;
  d["achieved_value"] = r.achieved_value;
  d["bound"] = r.bound ? py::cast(*r.bound) : py::none();
  d["seed"] = r.seed;
  return d;
}

py::dict summary_dict(const SweepSummary& s) {
  py::dict d;
  d["sweep_value"] = s.sweep_value;
  d["trials"] = s.trials;
  d["mean"] = s.mean;
  d["std"] = s.std;
  d["ci_low"] = s.ci_low;
  d["ci_high"] = s.ci_high;
  d["bound"] = s.bound ? py::cast(*s.bound) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Receding-horizon planning for non-stationary MDPs";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<IndexError>(m, "IndexError", PyExc_IndexError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<NonStationaryMdp>(m, "Mdp")
      .def(py::init(&mdp_from_arrays), py::arg("kernels"), py::arg("rewards"),
           "Build from kernels[t, s, a, s'] and rewards[t, s, a].")
      .def_property_readonly("horizon", &NonStationaryMdp::horizon)
      .def_property_readonly("num_states", &NonStationaryMdp::num_states)
      .def_property_readonly("num_actions", &NonStationaryMdp::num_actions)
      .def_property_readonly("kernels", &kernels_array)
      .def_property_readonly("rewards", &rewards_array)
      .def("to_json", [](const NonStationaryMdp& mdp) { return mdp_to_json(mdp).dump(); })
      .def_static("from_json", [](const std::string& text) {
        try {
          return mdp_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
          throw InputError(e.what());
        }
      })
      .def("save", [](const NonStationaryMdp& mdp, const std::filesystem::path& p) { save_mdp(mdp, p); })
      .def_static("load", &load_mdp)
      .def("__eq__", [](const NonStationaryMdp& a, const NonStationaryMdp& b) { return a == b; })
      .def("__repr__", [](const NonStationaryMdp& mdp) {
        std::ostringstream ss;
        ss << "Mdp(|S|=" << mdp.num_states() << ", |A|=" << mdp.num_actions() << ", T=" << mdp.horizon() << ")";
        return ss.str();
      });

  m.def("span", [](const std::vector<double>& v) { return span(v); }, py::arg("v"));
  m.def("total_variation", [](const std::vector<double>& p, const std::vector<double>& q) {
    return total_variation(p, q);
  });

  m.def("random_ergodic_mdp", &random_ergodic_mdp, py::arg("num_states"), py::arg("num_actions"),
        py::arg("horizon"), py::arg("mixing_floor"), py::arg("seed"));
  m.def(
      "queueing_mdp",
      [](std::vector<double> rates, std::size_t cap, Time T, double lo, double hi, double period) {
        QueueConfig cfg;
        cfg.service_rates = std::move(rates);
        cfg.queue_cap = cap;
        cfg.horizon = T;
        cfg.arrival_rate = sinusoid_rate(lo, hi, period);
        return build_queueing_mdp(cfg).mdp;
      },
      py::arg("service_rates"), py::arg("queue_cap"), py::arg("horizon"), py::arg("arrival_min") = 10.0,
      py::arg("arrival_max") = 100.0, py::arg("period") = 50.0);

  m.def(
      "solve_optimal",
      [](const NonStationaryMdp& mdp) {
        const auto sol = solve_optimal(mdp);
        py::dict d;
        d["v_star"] = values_array(sol.v_star);
        d["pi_star"] = schedule_array(sol.pi_star);
        py::array_t<double> q({mdp.num_epochs(), mdp.num_states(), mdp.num_actions()});
        std::copy(sol.q_star.begin(), sol.q_star.end(), q.mutable_data());
        d["q_star"] = q;
        return d;
      },
      py::arg("mdp"), "Backward induction with the true dynamics: v_star, q_star, pi_star.");

  m.def(
      "mpdp_schedule",
      [](const NonStationaryMdp& mdp, std::size_t k, double eps, double delta, std::uint64_t seed) {
        MpdpSchedule plan;
        if (eps == 0.0 && delta == 0.0) {
          plan = mpdp_schedule(mdp, ExactForecastProvider{}, k, seed);
        } else {
          plan = mpdp_schedule(mdp, PerturbedForecastProvider(ErrorProfile::constant(k + 1, eps, delta)), k, seed);
        }
        return schedule_array(plan.schedule);
      },
      py::arg("mdp"), py::arg("k"), py::arg("eps") = 0.0, py::arg("delta") = 0.0, py::arg("seed") = 0,
      "MPDP actions for every (t, s) with a k-step forecast, exact or perturbed by (eps, delta).");

  m.def(
      "evaluate_policy",
      [](const NonStationaryMdp& mdp, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& pi) {
        return values_array(evaluate_policy(mdp, schedule_from(mdp, pi)));
      },
      py::arg("mdp"), py::arg("schedule"));

  m.def(
      "contraction_coefficient",
      [](const NonStationaryMdp& mdp, std::size_t J, const std::string& method, std::uint64_t samples,
         std::uint64_t seed) {
        const auto mode = method == "exhaustive" ? ContractionMode::exhaustive()
                          : method == "sampled" ? ContractionMode::sampled(samples, seed)
                                                : throw InputError("method must be exhaustive or sampled");
        const auto cert = contraction_coefficient(mdp, J, mode);
        py::dict d;
        d["gamma"] = cert.gamma;
        d["J"] = cert.J;
        d["method"] = to_string(cert.method);
        d["policy_pairs_examined"] = cert.policy_pairs_examined;
        return d;
      },
      py::arg("mdp"), py::arg("J") = 1, py::arg("method") = "exhaustive", py::arg("samples") = 1000,
      py::arg("seed") = 0);

  m.def(
      "diameter",
      [](const NonStationaryMdp& mdp, Time cutoff) {
        const auto d = diameter(mdp, solve_optimal(mdp).v_star, cutoff);
        py::dict out;
        out["D"] = d.D;
        out["truncated"] = d.truncated;
        out["target_sequence"] = d.target_sequence;
        return out;
      },
      py::arg("mdp"), py::arg("cutoff") = 0);

  m.def(
      "regret_bound",
      [](double T, std::size_t k, std::size_t J, double gamma, double D, std::vector<double> eps,
         std::vector<double> delta) {
        const std::size_t length = regret_bound_profile_length(k, J);
        if (eps.size() == 1) eps.assign(length, eps.front());
        if (delta.size() == 1) delta.assign(length, delta.front());
        const auto b = regret_bound(T, k, J, gamma, D, eps, delta);
        py::dict d;
        d["total"] = b.total;
        d["noise_free"] = b.noise_free_term;
        d["eps0"] = b.eps0_term;
        d["delta0"] = b.delta0_term;
        d["geometric"] = b.geometric_term;
        d["tail"] = b.tail_term;
        return d;
      },
      py::arg("T"), py::arg("k"), py::arg("J"), py::arg("gamma"), py::arg("D"),
      py::arg("eps") = std::vector<double>{0.0}, py::arg("delta") = std::vector<double>{0.0});

  m.def(
      "run_config",
      [](const std::string& text, const std::filesystem::path& base_dir, std::size_t workers) {
        ExperimentConfig cfg;
        try {
          cfg = parse_config(nlohmann::json::parse(text), base_dir);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(e.what());
        }
        RegretReport report;
        {
          py::gil_scoped_release release;
          report = run_sweep(cfg, RunOptions{workers});
        }
        py::list rows, summary;
        for (const auto& r : report.rows) rows.append(row_dict(r));
        for (const auto& s : report.summary) summary.append(summary_dict(s));
        py::dict d;
        d["rows"] = rows;
        d["summary"] = summary;
        return d;
      },
      py::arg("config_json"), py::arg("base_dir") = std::filesystem::path{}, py::arg("workers") = 1,
      "Run an experiment config given as a JSON string; returns per-trial rows and the summary.");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_main(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line tool in-process: returns (exit code, stdout, stderr).");
}
