#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpdp/errors.hpp"

namespace mpdp {

using StateId = std::size_t;
using ActionId = std::size_t;
using Time = std::size_t;

/// A real vector indexed by state (V, psi-hat, psi-tilde, hitting times, ...).
using ValueVector = std::vector<double>;

inline constexpr double kStochasticTolerance = 1e-12;

struct Transition {
  StateId next;
  double prob;
};

/// P(. | s, a) for every (s, a), stored row-sparse.
///
/// Rows are kept sorted by successor with duplicate successors merged and zero
/// entries dropped. Construction refuses rows that are not stochastic within
/// kStochasticTolerance; nothing is silently renormalised.
class TransitionKernel {
 public:
  TransitionKernel() = default;

  /// `rows[s * num_actions + a]` lists the successors of (s, a).
  TransitionKernel(std::size_t num_states, std::size_t num_actions,
                   std::vector<std::vector<Transition>> rows);

  /// Dense (state, action, next-state) tensor in row-major order.
  static TransitionKernel from_dense(std::size_t num_states, std::size_t num_actions,
                                     std::span<const double> probs);

  /// Every action moves every state to itself.
  static TransitionKernel identity(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const { return states_; }
  std::size_t num_actions() const { return actions_; }
  std::size_t nonzeros() const { return entries_.size(); }

  /// Same sparsity pattern with new probabilities, one per stored entry in row order.
  /// Rows are validated as in the constructor; entries set to zero are dropped.
  TransitionKernel reweighted(std::span<const double> probs) const;

  std::span<const Transition> row(StateId s, ActionId a) const;
  double prob(StateId s, ActionId a, StateId next) const;
  double expect(StateId s, ActionId a, std::span<const double> v) const;
  std::vector<double> dense_row(StateId s, ActionId a) const;
  std::vector<double> to_dense() const;

  friend bool operator==(const TransitionKernel& x, const TransitionKernel& y);

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Transition> entries_;
};

/// r(s, a) in [0, 1].
class RewardTable {
 public:
  RewardTable() = default;
  RewardTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values);
  static RewardTable constant(std::size_t num_states, std::size_t num_actions, double value);

  std::size_t num_states() const { return states_; }
  std::size_t num_actions() const { return actions_; }
  double operator()(StateId s, ActionId a) const { return values_[s * actions_ + a]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const RewardTable&, const RewardTable&) = default;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
};

/// Finite MDP with time-indexed dynamics over decision epochs t = 0..T.
class NonStationaryMdp {
 public:
  NonStationaryMdp() = default;
  NonStationaryMdp(std::vector<TransitionKernel> kernels, std::vector<RewardTable> rewards);

  Time horizon() const { return kernels_.size() - 1; }
  std::size_t num_epochs() const { return kernels_.size(); }
  std::size_t num_states() const { return states_; }
  std::size_t num_actions() const { return actions_; }

  const TransitionKernel& kernel(Time t) const;
  const RewardTable& reward(Time t) const;

  friend bool operator==(const NonStationaryMdp&, const NonStationaryMdp&) = default;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<TransitionKernel> kernels_;
  std::vector<RewardTable> rewards_;
};

/// Deterministic time-indexed policy: actions(t, s) for t = 0..T.
class PolicySchedule {
 public:
  PolicySchedule() = default;
  PolicySchedule(std::size_t num_epochs, std::size_t num_states, ActionId fill = 0);

  std::size_t num_epochs() const { return epochs_; }
  std::size_t num_states() const { return states_; }

  ActionId at(Time t, StateId s) const { return actions_[t * states_ + s]; }
  void set(Time t, StateId s, ActionId a) { actions_[t * states_ + s] = a; }
  std::span<const ActionId> slice(Time t) const;
  std::span<ActionId> slice(Time t);

  /// Throws IndexError unless every entry is < num_actions and the shape matches the MDP.
  void validate(const NonStationaryMdp& mdp) const;

  friend bool operator==(const PolicySchedule&, const PolicySchedule&) = default;

 private:
  std::size_t epochs_ = 0;
  std::size_t states_ = 0;
  std::vector<ActionId> actions_;
};

/// Square row-stochastic matrix, dense row-major.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  StochasticMatrix(std::size_t n, std::vector<double> entries, double tolerance = 1e-10);
  static StochasticMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

// --- span semi-norm and distances --------------------------------------------

/// max_i v(i) - min_i v(i). Throws DimensionError on an empty vector.
double span(std::span<const double> v);

/// Elementwise u - v.
ValueVector difference(std::span<const double> u, std::span<const double> v);

/// (1/2) * sum_j |p(j) - q(j)|, so the result lies in [0, 1] for distributions.
double total_variation(std::span<const Transition> p, std::span<const Transition> q);
double total_variation(std::span<const double> p, std::span<const double> q);

/// sum_j min(p(j), q(j)).
double overlap(std::span<const double> p, std::span<const double> q);

// --- Bellman operators ---------------------------------------------------------

struct BellmanResult {
  ValueVector values;
  std::vector<ActionId> greedy;  // lowest ActionId among maximisers
};

/// One optimal backup on an arbitrary (kernel, reward) pair.
BellmanResult bellman_backup(const TransitionKernel& kernel, const RewardTable& reward,
                             std::span<const double> v);

/// (L_t v)(s) = max_a { r_t(s,a) + sum_s' P_t(s'|s,a) v(s') }.
BellmanResult bellman_apply(const NonStationaryMdp& mdp, Time t, std::span<const double> v);

/// (L_t^pi v)(s) = r_t(s, pi(s)) + sum_s' P_t(s'|s, pi(s)) v(s').
ValueVector bellman_apply_policy(const NonStationaryMdp& mdp, Time t,
                                 std::span<const ActionId> policy, std::span<const double> v);

/// L_{t_start} o ... o L_{t_end} v; L_{t_end} is applied first.
ValueVector bellman_compose(const NonStationaryMdp& mdp, Time t_start, Time t_end,
                            std::span<const double> v);

/// Row s is P_t(. | s, pi(s)).
StochasticMatrix kernel_under_policy(const NonStationaryMdp& mdp, Time t,
                                     std::span<const ActionId> policy);

/// Left-to-right product M_0 M_1 ... M_{n-1}.
StochasticMatrix kernel_compose(std::span<const StochasticMatrix> matrices);

}  // namespace mpdp
