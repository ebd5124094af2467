#include "mpdp/planner.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mpdp {

namespace {

void check_bound_inputs(std::size_t J, double gamma, double D) {
  if (J == 0) throw InputError("J must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  if (!(D >= 0.0)) throw InputError("diameter must be non-negative");
}

}  // namespace

OracleSolution solve_optimal(const NonStationaryMdp& mdp) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t epochs = mdp.num_epochs();
  OracleSolution sol;
  sol.num_states = S;
  sol.num_actions = A;
  sol.v_star.assign(epochs + 1, ValueVector(S, 0.0));
  sol.q_star.assign(epochs * S * A, 0.0);
  sol.pi_star = PolicySchedule(epochs, S);
  for (Time t = epochs; t-- > 0;) {
    const auto& kernel = mdp.kernel(t);
    const auto& reward = mdp.reward(t);
    const auto& next = sol.v_star[t + 1];
    for (StateId s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      ActionId best_a = 0;
      for (ActionId a = 0; a < A; ++a) {
        const double q = reward(s, a) + kernel.expect(s, a, next);
        sol.q_star[(t * S + s) * A + a] = q;
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      sol.v_star[t][s] = best;
      sol.pi_star.set(t, s, best_a);
    }
  }
  return sol;
}

std::vector<ValueVector> psi_tilde(const NonStationaryMdp& mdp, Time t, std::size_t k) {
  if (t > mdp.horizon()) throw IndexError("psi_tilde: time beyond horizon");
  const std::size_t S = mdp.num_states();
  std::vector<ValueVector> psi(k + 2, ValueVector(S, 0.0));
  for (std::size_t l = k + 1; l-- > 0;) {
    if (t + l > mdp.horizon()) continue;
    psi[l] = bellman_apply(mdp, t + l, psi[l + 1]).values;
  }
  return psi;
}

std::vector<ValueVector> psi_hat(const ForecastWindow& window) {
  const std::size_t S = window.num_states();
  std::vector<ValueVector> psi(window.size() + 1, ValueVector(S, 0.0));
  for (std::size_t l = window.size(); l-- > 0;) {
    if (window.padded[l]) continue;
    psi[l] = bellman_backup(window.kernels[l], window.rewards[l], psi[l + 1]).values;
  }
  return psi;
}

std::vector<double> q_hat_row(const ForecastWindow& window, const std::vector<ValueVector>& psi,
                              StateId s) {
  const std::size_t A = window.num_actions();
  std::vector<double> q(A);
  const auto& kernel = window.kernels.front();
  const auto& reward = window.rewards.front();
  for (ActionId a = 0; a < A; ++a) q[a] = reward(s, a) + kernel.expect(s, a, psi[1]);
  return q;
}

ActionId greedy_action(std::span<const double> q_row) {
  ActionId best = 0;
  for (ActionId a = 1; a < q_row.size(); ++a) {
    if (q_row[a] > q_row[best]) best = a;
  }
  return best;
}

PlanResult mpdp_step(const ForecastWindow& window, StateId s) {
  if (s >= window.num_states()) throw IndexError("mpdp_step: state " + std::to_string(s));
  PlanResult out;
  out.psi_hat = psi_hat(window);
  out.q_hat_row = q_hat_row(window, out.psi_hat, s);
  out.action = greedy_action(out.q_hat_row);
  return out;
}

std::vector<ActionId> mpdp_slice(const ForecastWindow& window) {
  const auto psi = psi_hat(window);
  std::vector<ActionId> slice(window.num_states());
  for (StateId s = 0; s < slice.size(); ++s) slice[s] = greedy_action(q_hat_row(window, psi, s));
  return slice;
}

MpdpSchedule mpdp_schedule(const NonStationaryMdp& mdp, const ForecastProvider& provider,
                           std::size_t k, std::uint64_t seed, bool measure) {
  MpdpSchedule out{PolicySchedule(mdp.num_epochs(), mdp.num_states()), std::nullopt};
  if (measure) out.measured = ErrorProfile::zeros(k + 1);
  for (Time t = 0; t <= mdp.horizon(); ++t) {
    Rng rng = make_rng(seed, t);
    const auto window = provider.forecast(mdp, t, k, rng);
    const auto slice = mpdp_slice(window);
    std::copy(slice.begin(), slice.end(), out.schedule.slice(t).begin());
    if (measure) out.measured = dominate(*out.measured, measure_errors(window, mdp));
  }
  return out;
}

std::vector<ValueVector> evaluate_policy(const NonStationaryMdp& mdp,
                                         const PolicySchedule& schedule) {
  schedule.validate(mdp);
  std::vector<ValueVector> v(mdp.num_epochs() + 1, ValueVector(mdp.num_states(), 0.0));
  for (Time t = mdp.num_epochs(); t-- > 0;) {
    v[t] = bellman_apply_policy(mdp, t, schedule.slice(t), v[t + 1]);
  }
  return v;
}

double evaluate_policy_exact(const NonStationaryMdp& mdp, const PolicySchedule& schedule,
                             StateId s0) {
  if (s0 >= mdp.num_states()) throw IndexError("initial state " + std::to_string(s0));
  return evaluate_policy(mdp, schedule)[0][s0];
}

double q_gap_bound(std::size_t k, std::size_t J, double gamma, double D, double span_v_future,
                   const ErrorProfile& profile) {
  check_bound_inputs(J, gamma, D);
  profile.validate();
  if (profile.size() < k + 1) {
    throw InputError("q_gap_bound needs " + std::to_string(k + 1) + " profile entries");
  }
  const std::size_t blocks = k / J;
  const std::size_t rem = k % J;
  const double g_blocks = std::pow(gamma, static_cast<double>(blocks));
  double full = 0.0;
  for (std::size_t i = 0; i < blocks; ++i) {
    full += std::pow(gamma, static_cast<double>(i)) * profile.block_error(i * J, J, D);
  }
  return g_blocks * span_v_future + 2.0 * profile.eps[0] + 2.0 * profile.delta[0] * D +
         4.0 * full + 4.0 * g_blocks * profile.block_error(blocks * J, rem, D);
}

double psi_error_bound(std::size_t k, std::size_t J, double gamma, double D,
                       const ErrorProfile& profile) {
  check_bound_inputs(J, gamma, D);
  profile.validate();
  const std::size_t blocks_floor = k / J;
  const std::size_t blocks_ceil = (k + J - 1) / J;
  double full = 0.0;
  for (std::size_t i = 0; i < blocks_ceil; ++i) {
    full += std::pow(gamma, static_cast<double>(i)) * profile.block_error(i * J, J, D);
  }
  return 2.0 * full + 2.0 * std::pow(gamma, static_cast<double>(blocks_floor)) *
                          profile.block_error(blocks_floor * J, k % J, D);
}

double q_estimate_error_bound(std::size_t k, std::size_t J, double gamma, double D,
                              const ErrorProfile& profile) {
  if (profile.size() == 0) throw InputError("empty error profile");
  return profile.eps[0] + profile.delta[0] * D + psi_error_bound(k, J, gamma, D, profile);
}

}  // namespace mpdp
