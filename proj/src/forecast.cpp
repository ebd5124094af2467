#include "mpdp/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mpdp {

namespace {

ForecastWindow empty_window(Time t, std::size_t k) {
  ForecastWindow w;
  w.base_time = t;
  w.k = k;
  w.kernels.reserve(k + 1);
  w.rewards.reserve(k + 1);
  w.padded.reserve(k + 1);
  return w;
}

void push_padding(ForecastWindow& w, std::size_t S, std::size_t A) {
  w.kernels.push_back(TransitionKernel::identity(S, A));
  w.rewards.push_back(RewardTable::constant(S, A, 0.0));
  w.padded.push_back(true);
}

void check_time(const NonStationaryMdp& mdp, Time t) {
  if (t > mdp.horizon()) {
    throw IndexError("forecast base time " + std::to_string(t) + " beyond horizon " +
                     std::to_string(mdp.horizon()));
  }
}

std::vector<Transition> mix_row(std::span<const Transition> truth, double weight,
                                std::size_t num_states, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> noise(num_states);
  double total = 0.0;
  for (auto& x : noise) {
    x = expo(rng);
    total += x;
  }
  std::vector<double> row(num_states, 0.0);
  for (StateId n = 0; n < num_states; ++n) row[n] = weight * noise[n] / total;
  for (const auto& tr : truth) row[tr.next] += (1.0 - weight) * tr.prob;
  std::vector<Transition> out;
  out.reserve(num_states);
  for (StateId n = 0; n < num_states; ++n) {
    if (row[n] > 0.0) out.push_back({n, row[n]});
  }
  return out;
}

}  // namespace

// --- ErrorProfile ----------------------------------------------------------------

ErrorProfile ErrorProfile::zeros(std::size_t length) {
  return {std::vector<double>(length, 0.0), std::vector<double>(length, 0.0)};
}

ErrorProfile ErrorProfile::constant(std::size_t length, double eps, double delta) {
  return {std::vector<double>(length, eps), std::vector<double>(length, delta)};
}

void ErrorProfile::validate() const {
  if (eps.size() != delta.size()) throw InputError("error profile: eps/delta lengths differ");
  for (std::size_t l = 0; l < eps.size(); ++l) {
    if (!(eps[l] >= 0.0) || !(delta[l] >= 0.0)) {
      throw InputError("error profile: negative or NaN entry at lookahead " + std::to_string(l));
    }
    if (delta[l] > 1.0) {
      throw InputError("error profile: delta[" + std::to_string(l) +
                       "] exceeds the total-variation ceiling 1");
    }
  }
}

double ErrorProfile::block_error(std::size_t first, std::size_t count, double diameter) const {
  if (count == 0) return 0.0;
  if (first + count >= eps.size() || first + count >= delta.size()) {
    throw InputError("error profile too short: index " + std::to_string(first + count) +
                     " required, profile has " + std::to_string(std::min(eps.size(), delta.size())) +
                     " entries");
  }
  double acc = 0.0;
  for (std::size_t j = 1; j <= count; ++j) acc += eps[first + j] + delta[first + j] * diameter;
  return acc;
}

ErrorProfile dominate(const ErrorProfile& a, const ErrorProfile& b) {
  const std::size_t n = std::max(a.size(), b.size());
  ErrorProfile out = ErrorProfile::zeros(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (l < a.size()) {
      out.eps[l] = a.eps[l];
      out.delta[l] = a.delta[l];
    }
    if (l < b.size()) {
      out.eps[l] = std::max(out.eps[l], b.eps[l]);
      out.delta[l] = std::max(out.delta[l], b.delta[l]);
    }
  }
  return out;
}

double NoiseSchedule::sigma(std::size_t lookahead) const {
  if (lookahead == 0) return base;
  return std::max(base, growth * static_cast<double>(lookahead));
}

// --- providers ---------------------------------------------------------------------

ForecastWindow exact_forecast(const NonStationaryMdp& mdp, Time t, std::size_t k) {
  check_time(mdp, t);
  auto w = empty_window(t, k);
  for (std::size_t l = 0; l <= k; ++l) {
    if (t + l > mdp.horizon()) {
      push_padding(w, mdp.num_states(), mdp.num_actions());
      continue;
    }
    w.kernels.push_back(mdp.kernel(t + l));
    w.rewards.push_back(mdp.reward(t + l));
    w.padded.push_back(false);
  }
  return w;
}

ForecastWindow perturbed_forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                                  const ErrorProfile& profile, Rng& rng) {
  check_time(mdp, t);
  profile.validate();
  if (profile.size() < k + 1) {
    throw InputError("perturbed forecast needs " + std::to_string(k + 1) +
                     " profile entries, got " + std::to_string(profile.size()));
  }
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  auto w = empty_window(t, k);
  for (std::size_t l = 0; l <= k; ++l) {
    if (t + l > mdp.horizon()) {
      push_padding(w, S, A);
      continue;
    }
    const auto& truth_r = mdp.reward(t + l);
    const auto& truth_p = mdp.kernel(t + l);

    std::vector<double> r(truth_r.values().begin(), truth_r.values().end());
    if (profile.eps[l] > 0.0) {
      std::uniform_real_distribution<double> u(-profile.eps[l], profile.eps[l]);
      for (auto& x : r) x = std::clamp(x + u(rng), 0.0, 1.0);
    }
    w.rewards.emplace_back(S, A, std::move(r));

    if (profile.delta[l] > 0.0) {
      std::vector<std::vector<Transition>> rows(S * A);
      for (StateId s = 0; s < S; ++s) {
        for (ActionId a = 0; a < A; ++a) {
          rows[s * A + a] = mix_row(truth_p.row(s, a), profile.delta[l], S, rng);
        }
      }
      w.kernels.emplace_back(S, A, std::move(rows));
    } else {
      w.kernels.push_back(truth_p);
    }
    w.padded.push_back(false);
  }
  return w;
}

ForecastWindow parametric_noise_forecast(const NonStationaryMdp& mdp, const ParametricModel& model,
                                         Time t, std::size_t k, const NoiseSchedule& noise,
                                         Rng& rng) {
  check_time(mdp, t);
  if (noise.base < 0.0 || noise.growth < 0.0) {
    throw InputError("noise schedule must be non-negative");
  }
  auto w = empty_window(t, k);
  for (std::size_t l = 0; l <= k; ++l) {
    if (t + l > mdp.horizon()) {
      push_padding(w, mdp.num_states(), mdp.num_actions());
      continue;
    }
    const double sigma = noise.sigma(l);
    double theta = model.parameter(t + l);
    if (sigma > 0.0) {
      std::normal_distribution<double> gauss(0.0, sigma);
      theta = std::max(theta + gauss(rng), model.floor);
      w.kernels.push_back(model.kernel(t + l, theta));
    } else {
      w.kernels.push_back(mdp.kernel(t + l));
    }
    w.rewards.push_back(mdp.reward(t + l));
    w.padded.push_back(false);
  }
  return w;
}

ErrorProfile measure_errors(const ForecastWindow& window, const NonStationaryMdp& mdp) {
  const std::size_t n = window.size();
  ErrorProfile out = ErrorProfile::zeros(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (window.padded[l]) continue;
    const Time t = window.base_time + l;
    const auto& kernel = mdp.kernel(t);
    const auto& reward = mdp.reward(t);
    for (StateId s = 0; s < mdp.num_states(); ++s) {
      for (ActionId a = 0; a < mdp.num_actions(); ++a) {
        out.eps[l] = std::max(out.eps[l], std::abs(window.rewards[l](s, a) - reward(s, a)));
        out.delta[l] = std::max(out.delta[l],
                                total_variation(window.kernels[l].row(s, a), kernel.row(s, a)));
      }
    }
  }
  return out;
}

ForecastWindow ExactForecastProvider::forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                                               Rng&) const {
  return exact_forecast(mdp, t, k);
}

PerturbedForecastProvider::PerturbedForecastProvider(ErrorProfile profile)
    : profile_(std::move(profile)) {
  profile_.validate();
}

ForecastWindow PerturbedForecastProvider::forecast(const NonStationaryMdp& mdp, Time t,
                                                   std::size_t k, Rng& rng) const {
  return perturbed_forecast(mdp, t, k, profile_, rng);
}

bool PerturbedForecastProvider::deterministic() const {
  return std::all_of(profile_.eps.begin(), profile_.eps.end(), [](double x) { return x == 0; }) &&
         std::all_of(profile_.delta.begin(), profile_.delta.end(), [](double x) { return x == 0; });
}

ParametricForecastProvider::ParametricForecastProvider(ParametricModel model, NoiseSchedule noise)
    : model_(std::move(model)), noise_(noise) {
  if (!model_.parameter || !model_.kernel) {
    throw ConfigError("parametric forecast needs a parameter path and a kernel constructor");
  }
}

ForecastWindow ParametricForecastProvider::forecast(const NonStationaryMdp& mdp, Time t,
                                                    std::size_t k, Rng& rng) const {
  return parametric_noise_forecast(mdp, model_, t, k, noise_, rng);
}

}  // namespace mpdp
