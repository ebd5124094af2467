#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's algorithms: values are recomputed from dense tensors by brute force.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mpdp/core.hpp"
#include "mpdp/forecast.hpp"

namespace oracle {

using mpdp::NonStationaryMdp;
using mpdp::PolicySchedule;

/// Random MDP with sparse rows (each successor kept with probability 1/2, at least one).
inline NonStationaryMdp random_mdp(std::size_t S, std::size_t A, std::size_t T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<mpdp::TransitionKernel> kernels;
  std::vector<mpdp::RewardTable> rewards;
  for (std::size_t t = 0; t <= T; ++t) {
    std::vector<double> probs(S * A * S, 0.0);
    for (std::size_t row = 0; row < S * A; ++row) {
      double total = 0.0;
      for (std::size_t j = 0; j < S; ++j) {
        if (unit(rng) < 0.5) {
          probs[row * S + j] = unit(rng) + 0.05;
          total += probs[row * S + j];
        }
      }
      if (total == 0.0) {
        probs[row * S + rng() % S] = 1.0;
        total = 1.0;
      }
      for (std::size_t j = 0; j < S; ++j) probs[row * S + j] /= total;
      // Exact stochasticity: push the rounding residue onto the largest entry.
      double sum = 0.0;
      for (std::size_t j = 0; j < S; ++j) sum += probs[row * S + j];
      auto* big = std::max_element(&probs[row * S], &probs[row * S] + S);
      *big += 1.0 - sum;
    }
    std::vector<double> r(S * A);
    for (auto& x : r) x = unit(rng);
    kernels.push_back(mpdp::TransitionKernel::from_dense(S, A, probs));
    rewards.emplace_back(S, A, std::move(r));
  }
  return NonStationaryMdp(std::move(kernels), std::move(rewards));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

/// P_t(s' | s, a) from the dense tensor.
inline double p(const NonStationaryMdp& mdp, std::size_t t, std::size_t s, std::size_t a, std::size_t next) {
  const auto dense = mdp.kernel(t).to_dense();
  const std::size_t S = mdp.num_states();
  return dense[(s * mdp.num_actions() + a) * S + next];
}

/// r(s,a) + sum_s' P(s'|s,a) v(s') by an explicit loop over every successor.
inline double backup(const NonStationaryMdp& mdp, std::size_t t, std::size_t s, std::size_t a,
                     const std::vector<double>& v) {
  const auto dense = mdp.kernel(t).to_dense();
  const std::size_t S = mdp.num_states();
  double acc = mdp.reward(t)(s, a);
  for (std::size_t j = 0; j < S; ++j) acc += dense[(s * mdp.num_actions() + a) * S + j] * v[j];
  return acc;
}

inline std::vector<double> max_backup(const NonStationaryMdp& mdp, std::size_t t, const std::vector<double>& v) {
  std::vector<double> out(mdp.num_states(), -std::numeric_limits<double>::infinity());
  for (std::size_t s = 0; s < mdp.num_states(); ++s) {
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) out[s] = std::max(out[s], backup(mdp, t, s, a, v));
  }
  return out;
}

/// Expected total reward of a schedule from s0, by pushing the state distribution forward.
inline double forward_value(const NonStationaryMdp& mdp, const PolicySchedule& pi, std::size_t s0) {
  const std::size_t S = mdp.num_states();
  std::vector<double> dist(S, 0.0);
  dist[s0] = 1.0;
  double total = 0.0;
  for (std::size_t t = 0; t < mdp.num_epochs(); ++t) {
    const auto dense = mdp.kernel(t).to_dense();
    std::vector<double> next(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      if (dist[s] == 0.0) continue;
      const std::size_t a = pi.at(t, s);
      total += dist[s] * mdp.reward(t)(s, a);
      for (std::size_t j = 0; j < S; ++j) next[j] += dist[s] * dense[(s * mdp.num_actions() + a) * S + j];
    }
    dist = next;
  }
  return total;
}

/// Advances an odometer over all |A|^(cells) schedules; false once it wraps.
inline bool next_schedule(PolicySchedule& pi, std::size_t A) {
  for (std::size_t t = 0; t < pi.num_epochs(); ++t) {
    for (std::size_t s = 0; s < pi.num_states(); ++s) {
      if (pi.at(t, s) + 1 < A) {
        pi.set(t, s, pi.at(t, s) + 1);
        return true;
      }
      pi.set(t, s, 0);
    }
  }
  return false;
}

/// max over every deterministic schedule of the forward value, per start state.
inline std::vector<double> best_values_by_enumeration(const NonStationaryMdp& mdp) {
  std::vector<double> best(mdp.num_states(), -std::numeric_limits<double>::infinity());
  PolicySchedule pi(mdp.num_epochs(), mdp.num_states(), 0);
  do {
    for (std::size_t s0 = 0; s0 < mdp.num_states(); ++s0) best[s0] = std::max(best[s0], forward_value(mdp, pi, s0));
  } while (next_schedule(pi, mdp.num_actions()));
  return best;
}

/// Naive triple-loop product of two dense n x n matrices.
inline std::vector<double> matmul(const std::vector<double>& x, const std::vector<double>& y, std::size_t n) {
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m) out[i * n + j] += x[i * n + m] * y[m * n + j];
  return out;
}

/// Minimal expected first time tau >= 1 with s_{t0+tau} = target[t0+tau], every state
/// counting as a target at epoch T+1; minimised over every deterministic schedule on
/// epochs t0..T by forward propagation of the not-yet-hit mass.
inline double hitting_time_by_enumeration(const NonStationaryMdp& mdp, const std::vector<std::size_t>& target,
                                          std::size_t t0, std::size_t s0) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t epochs = mdp.num_epochs();
  PolicySchedule pi(epochs, S, 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    bool canonical = true;  // skip schedules that differ only before t0
    for (std::size_t t = 0; t < t0 && canonical; ++t)
      for (std::size_t s = 0; s < S; ++s) canonical = canonical && pi.at(t, s) == 0;
    if (!canonical) continue;
    std::vector<double> alive(S, 0.0);
    alive[s0] = 1.0;
    double expected = 0.0;
    for (std::size_t t = t0; t < epochs; ++t) {
      const auto dense = mdp.kernel(t).to_dense();
      std::vector<double> next(S, 0.0);
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t j = 0; j < S; ++j) next[j] += alive[s] * dense[(s * A + pi.at(t, s)) * S + j];
      const double tau = static_cast<double>(t + 1 - t0);
      if (t + 1 == epochs) {
        for (double m : next) expected += tau * m;
        break;
      }
      expected += tau * next[target[t + 1]];
      next[target[t + 1]] = 0.0;
      alive = next;
    }
    best = std::min(best, expected);
  } while (next_schedule(pi, A));
  return best;
}

/// The regret bound written out term by term with explicit index arithmetic.
inline double regret_bound(double T, std::size_t k, std::size_t J, double g, double D,
                           const std::vector<double>& eps, const std::vector<double>& delta) {
  const std::size_t fl = k / J;
  const std::size_t ce = (k + J - 1) / J;
  const std::size_t rem = k - fl * J;
  double total = T * std::pow(g, fl) * D;
  total += 2 * T * eps[0];
  double geo = 0.0;
  for (std::size_t i = 0; i + 1 <= ce; ++i) {
    double e = 0.0, d = 0.0;
    for (std::size_t j = 1; j <= J; ++j) e += eps[i * J + j];
    for (std::size_t j = 1; j <= J; ++j) d += delta[i * J + j] * D;
    geo += std::pow(g, i) * (e + d);
  }
  total += 4 * T * geo;
  total += 2 * T * delta[0] * D;
  double e = 0.0, d = 0.0;
  for (std::size_t j = 1; j <= rem; ++j) e += eps[fl * J + j];
  for (std::size_t j = 1; j <= rem; ++j) d += delta[fl * J + j] * D;
  total += 4 * T * std::pow(g, fl) * (e + d);
  return total;
}

/// Per-step gap bound written out term by term.
inline double q_gap_bound(std::size_t k, std::size_t J, double g, double D, double span_future,
                          const std::vector<double>& eps, const std::vector<double>& delta) {
  const std::size_t fl = k / J;
  const std::size_t rem = k - fl * J;
  double total = std::pow(g, fl) * span_future + 2 * eps[0] + 2 * delta[0] * D;
  for (std::size_t i = 0; i < fl; ++i) {
    double block = 0.0;
    for (std::size_t j = 1; j <= J; ++j) block += eps[i * J + j] + delta[i * J + j] * D;
    total += 4 * std::pow(g, i) * block;
  }
  double tail = 0.0;
  for (std::size_t j = 1; j <= rem; ++j) tail += eps[fl * J + j] + delta[fl * J + j] * D;
  return total + 4 * std::pow(g, fl) * tail;
}

/// Half-L1 distance of two dense rows.
inline double tv(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
  return 0.5 * acc;
}

struct MonteCarlo {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Sampled returns of a schedule from s0 using inverse-CDF sampling on dense rows.
inline MonteCarlo simulate(const NonStationaryMdp& mdp, const PolicySchedule& pi, std::size_t s0,
                           std::size_t episodes, std::uint64_t seed) {
  const std::size_t S = mdp.num_states();
  std::vector<std::vector<double>> dense;
  for (std::size_t t = 0; t < mdp.num_epochs(); ++t) dense.push_back(mdp.kernel(t).to_dense());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    std::size_t s = s0;
    double ret = 0.0;
    for (std::size_t t = 0; t < mdp.num_epochs(); ++t) {
      const std::size_t a = pi.at(t, s);
      ret += mdp.reward(t)(s, a);
      double u = unit(rng), acc = 0.0;
      std::size_t next = S - 1;
      for (std::size_t j = 0; j < S; ++j) {
        acc += dense[t][(s * mdp.num_actions() + a) * S + j];
        if (u < acc) {
          next = j;
          break;
        }
      }
      s = next;
    }
    sum += ret;
    sum_sq += ret * ret;
  }
  const double n = static_cast<double>(episodes);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace oracle
