#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mpdp/core.hpp"
#include "mpdp/rng.hpp"

namespace mpdp {

/// Predicted dynamics P-hat_{t+l|t}, r-hat_{t+l|t} for l = 0..k made at base time t.
///
/// Steps with t + l > T are padded: zero reward and an identity kernel. The
/// planner treats their value as exactly zero.
struct ForecastWindow {
  Time base_time = 0;
  std::size_t k = 0;
  std::vector<TransitionKernel> kernels;
  std::vector<RewardTable> rewards;
  std::vector<bool> padded;

  std::size_t size() const { return kernels.size(); }
  std::size_t num_states() const { return kernels.front().num_states(); }
  std::size_t num_actions() const { return kernels.front().num_actions(); }
};

/// Per-lookahead error bounds: eps[l] on rewards, delta[l] on kernel rows.
///
/// delta uses the half-L1 total variation distance, so every entry lies in [0, 1].
struct ErrorProfile {
  std::vector<double> eps;
  std::vector<double> delta;

  static ErrorProfile zeros(std::size_t length);
  static ErrorProfile constant(std::size_t length, double eps, double delta);

  std::size_t size() const { return eps.size(); }

  /// Throws InputError on negative entries, delta > 1 or mismatched lengths.
  void validate() const;

  /// sum_{j=1}^{count} (eps[first + j] + delta[first + j] * diameter).
  /// Throws InputError when first + count is past the end of the profile.
  double block_error(std::size_t first, std::size_t count, double diameter) const;
};

/// A profile that bounds both arguments entrywise (elementwise max).
ErrorProfile dominate(const ErrorProfile& a, const ErrorProfile& b);

ForecastWindow exact_forecast(const NonStationaryMdp& mdp, Time t, std::size_t k);

/// Rewards get U[-eps_l, eps_l] noise then are clamped to [0, 1]; each kernel row is
/// mixed with a random distribution at weight delta_l, which keeps its total
/// variation from the truth within delta_l.
ForecastWindow perturbed_forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                                  const ErrorProfile& profile, Rng& rng);

/// Standard deviation of the parameter noise at lookahead l:
/// base at l = 0 and max(base, growth * l) beyond.
struct NoiseSchedule {
  double base = 0.0;
  double growth = 0.0;

  double sigma(std::size_t lookahead) const;
};

/// An environment whose kernel at time t is determined by one scalar parameter.
struct ParametricModel {
  std::function<double(Time)> parameter;
  std::function<TransitionKernel(Time, double)> kernel;
  double floor = 1e-3;  // smallest admissible parameter value
};

/// Forecast kernels rebuilt from parameter + N(0, sigma_l^2), clamped at the floor.
/// Rewards are taken from the true MDP.
ForecastWindow parametric_noise_forecast(const NonStationaryMdp& mdp, const ParametricModel& model,
                                         Time t, std::size_t k, const NoiseSchedule& noise,
                                         Rng& rng);

/// Realised errors of a window against the truth; padded steps report zero.
ErrorProfile measure_errors(const ForecastWindow& window, const NonStationaryMdp& mdp);

/// Supplies a fresh window at every decision epoch.
class ForecastProvider {
 public:
  virtual ~ForecastProvider() = default;
  virtual ForecastWindow forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                                  Rng& rng) const = 0;
  /// True when the window does not depend on the random stream.
  virtual bool deterministic() const { return false; }
};

class ExactForecastProvider final : public ForecastProvider {
 public:
  ForecastWindow forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                          Rng& rng) const override;
  bool deterministic() const override { return true; }
};

class PerturbedForecastProvider final : public ForecastProvider {
 public:
  explicit PerturbedForecastProvider(ErrorProfile profile);
  ForecastWindow forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                          Rng& rng) const override;
  bool deterministic() const override;
  const ErrorProfile& profile() const { return profile_; }

 private:
  ErrorProfile profile_;
};

class ParametricForecastProvider final : public ForecastProvider {
 public:
  ParametricForecastProvider(ParametricModel model, NoiseSchedule noise);
  ForecastWindow forecast(const NonStationaryMdp& mdp, Time t, std::size_t k,
                          Rng& rng) const override;
  bool deterministic() const override { return noise_.base == 0.0 && noise_.growth == 0.0; }

 private:
  ParametricModel model_;
  NoiseSchedule noise_;
};

}  // namespace mpdp
