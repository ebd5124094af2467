#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpdp/core.hpp"
#include "mpdp/forecast.hpp"

namespace mpdp {

/// Outcome of one receding-horizon planning step at a single state.
struct PlanResult {
  ActionId action = 0;
  std::vector<ValueVector> psi_hat;  // psi_hat[l] for l = 0..k+1
  std::vector<double> q_hat_row;     // forecast Q over actions at the planned state
};

/// Clairvoyant backward induction over the true MDP.
struct OracleSolution {
  std::vector<ValueVector> v_star;  // t = 0..T+1, v_star[T+1] == 0
  std::vector<double> q_star;       // (t, s, a) row-major, t = 0..T
  PolicySchedule pi_star;
  std::size_t num_states = 0;
  std::size_t num_actions = 0;

  double q(Time t, StateId s, ActionId a) const {
    return q_star[(t * num_states + s) * num_actions + a];
  }
};

OracleSolution solve_optimal(const NonStationaryMdp& mdp);

/// Exact-dynamics lookahead values: result[l] for l = 0..k+1, zero when t + l > T
/// or l = k + 1.
std::vector<ValueVector> psi_tilde(const NonStationaryMdp& mdp, Time t, std::size_t k);

/// The same recursion on forecast dynamics; padded steps contribute zero.
std::vector<ValueVector> psi_hat(const ForecastWindow& window);

/// r-hat_{t|t}(s, .) + P-hat_{t|t}(. | s, .) psi_hat[1].
std::vector<double> q_hat_row(const ForecastWindow& window, const std::vector<ValueVector>& psi,
                              StateId s);

/// Lowest-index argmax.
ActionId greedy_action(std::span<const double> q_row);

PlanResult mpdp_step(const ForecastWindow& window, StateId s);

/// MPDP decisions for every state, sharing one psi-hat stack.
std::vector<ActionId> mpdp_slice(const ForecastWindow& window);

struct MpdpSchedule {
  PolicySchedule schedule;
  /// Elementwise max of the realised errors over all windows (only when requested).
  std::optional<ErrorProfile> measured;
};

/// Materialises the MPDP policy for all (t, s). The window at epoch t is drawn from
/// the stream make_rng(seed, t), so the result is independent of evaluation order.
MpdpSchedule mpdp_schedule(const NonStationaryMdp& mdp, const ForecastProvider& provider,
                           std::size_t k, std::uint64_t seed, bool measure = false);

/// V_t^pi for t = 0..T+1 by backward induction with L_t^{pi_t}.
std::vector<ValueVector> evaluate_policy(const NonStationaryMdp& mdp,
                                         const PolicySchedule& schedule);

/// V_0^pi(s0), computed exactly.
double evaluate_policy_exact(const NonStationaryMdp& mdp, const PolicySchedule& schedule,
                             StateId s0);

/// Per-step bound on Q*_t(s, a*) - Q*_t(s, a_mpdp):
///   g^{floor(k/J)} span_v_future + 2 eps_0 + 2 delta_0 D
///   + 4 sum_{i<floor(k/J)} g^i B_i + 4 g^{floor(k/J)} R,
/// with B_i the i-th full block of J lookahead errors and R the k % J remainder.
double q_gap_bound(std::size_t k, std::size_t J, double gamma, double D, double span_v_future,
                   const ErrorProfile& profile);

/// Bound on span(psi_hat - psi_tilde) accumulated over lookaheads 1..k:
///   2 sum_{i<ceil(k/J)} g^i B_i + 2 g^{floor(k/J)} R.
double psi_error_bound(std::size_t k, std::size_t J, double gamma, double D,
                       const ErrorProfile& profile);

/// eps_0 + delta_0 D + psi_error_bound(...).
double q_estimate_error_bound(std::size_t k, std::size_t J, double gamma, double D,
                              const ErrorProfile& profile);

}  // namespace mpdp
