#include "mpdp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mpdp {

namespace {

std::string row_label(StateId s, ActionId a) {
  return "(s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
}

void check_probability(double p, StateId s, ActionId a) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kStochasticTolerance) {
    throw InputError("transition probability " + std::to_string(p) + " outside [0, 1] at row " +
                     row_label(s, a));
  }
}

}  // namespace

// --- TransitionKernel ------------------------------------------------------------

TransitionKernel::TransitionKernel(std::size_t num_states, std::size_t num_actions,
                                   std::vector<std::vector<Transition>> rows)
    : states_(num_states), actions_(num_actions) {
  if (num_states == 0 || num_actions == 0) {
    throw DimensionError("transition kernel needs at least one state and one action");
  }
  if (rows.size() != num_states * num_actions) {
    throw DimensionError("transition kernel expects " + std::to_string(num_states * num_actions) +
                         " rows, got " + std::to_string(rows.size()));
  }
  offsets_.reserve(rows.size() + 1);
  offsets_.push_back(0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const StateId s = r / num_actions;
    const ActionId a = r % num_actions;
    auto& row = rows[r];
    std::sort(row.begin(), row.end(),
              [](const Transition& x, const Transition& y) { return x.next < y.next; });
    double total = 0.0;
    const std::size_t begin = entries_.size();
    for (const auto& tr : row) {
      if (tr.next >= num_states) {
        throw IndexError("successor " + std::to_string(tr.next) + " out of range at row " +
                         row_label(s, a));
      }
      check_probability(tr.prob, s, a);
      total += tr.prob;
      if (tr.prob == 0.0) continue;
      if (entries_.size() > begin && entries_.back().next == tr.next) {
        entries_.back().prob += tr.prob;
      } else {
        entries_.push_back(tr);
      }
    }
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      throw InputError("row " + row_label(s, a) + " sums to " + std::to_string(total) +
                       ", not 1");
    }
    offsets_.push_back(entries_.size());
  }
}

TransitionKernel TransitionKernel::reweighted(std::span<const double> probs) const {
  if (probs.size() != entries_.size()) {
    throw DimensionError("reweighted kernel expects " + std::to_string(entries_.size()) +
                         " probabilities, got " + std::to_string(probs.size()));
  }
  TransitionKernel out;
  out.states_ = states_;
  out.actions_ = actions_;
  out.offsets_.reserve(offsets_.size());
  out.entries_.reserve(entries_.size());
  out.offsets_.push_back(0);
  for (std::size_t r = 0; r + 1 < offsets_.size(); ++r) {
    const StateId s = r / actions_;
    const ActionId a = r % actions_;
    double total = 0.0;
    for (std::size_t e = offsets_[r]; e < offsets_[r + 1]; ++e) {
      check_probability(probs[e], s, a);
      total += probs[e];
      if (probs[e] != 0.0) out.entries_.push_back({entries_[e].next, probs[e]});
    }
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      throw InputError("row " + row_label(s, a) + " sums to " + std::to_string(total) + ", not 1");
    }
    out.offsets_.push_back(out.entries_.size());
  }
  return out;
}

TransitionKernel TransitionKernel::from_dense(std::size_t num_states, std::size_t num_actions,
                                              std::span<const double> probs) {
  if (probs.size() != num_states * num_actions * num_states) {
    throw DimensionError("dense kernel has " + std::to_string(probs.size()) +
                         " entries, expected S*A*S = " +
                         std::to_string(num_states * num_actions * num_states));
  }
  std::vector<std::vector<Transition>> rows(num_states * num_actions);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (StateId n = 0; n < num_states; ++n) {
      const double p = probs[r * num_states + n];
      if (p != 0.0) rows[r].push_back({n, p});
    }
  }
  return TransitionKernel(num_states, num_actions, std::move(rows));
}

TransitionKernel TransitionKernel::identity(std::size_t num_states, std::size_t num_actions) {
  std::vector<std::vector<Transition>> rows(num_states * num_actions);
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = {{r / num_actions, 1.0}};
  return TransitionKernel(num_states, num_actions, std::move(rows));
}

std::span<const Transition> TransitionKernel::row(StateId s, ActionId a) const {
  if (s >= states_ || a >= actions_) throw IndexError("kernel row " + row_label(s, a));
  const std::size_t r = s * actions_ + a;
  return {entries_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

double TransitionKernel::prob(StateId s, ActionId a, StateId next) const {
  for (const auto& tr : row(s, a)) {
    if (tr.next == next) return tr.prob;
  }
  return 0.0;
}

double TransitionKernel::expect(StateId s, ActionId a, std::span<const double> v) const {
  double acc = 0.0;
  for (const auto& tr : row(s, a)) acc += tr.prob * v[tr.next];
  return acc;
}

std::vector<double> TransitionKernel::dense_row(StateId s, ActionId a) const {
  std::vector<double> out(states_, 0.0);
  for (const auto& tr : row(s, a)) out[tr.next] = tr.prob;
  return out;
}

std::vector<double> TransitionKernel::to_dense() const {
  std::vector<double> out(states_ * actions_ * states_, 0.0);
  for (StateId s = 0; s < states_; ++s) {
    for (ActionId a = 0; a < actions_; ++a) {
      for (const auto& tr : row(s, a)) out[(s * actions_ + a) * states_ + tr.next] = tr.prob;
    }
  }
  return out;
}

bool operator==(const TransitionKernel& x, const TransitionKernel& y) {
  if (x.states_ != y.states_ || x.actions_ != y.actions_ || x.offsets_ != y.offsets_) {
    return false;
  }
  return std::equal(x.entries_.begin(), x.entries_.end(), y.entries_.begin(), y.entries_.end(),
                    [](const Transition& a, const Transition& b) {
                      return a.next == b.next && a.prob == b.prob;
                    });
}

// --- RewardTable -----------------------------------------------------------------

RewardTable::RewardTable(std::size_t num_states, std::size_t num_actions,
                         std::vector<double> values)
    : states_(num_states), actions_(num_actions), values_(std::move(values)) {
  if (values_.size() != states_ * actions_) {
    throw DimensionError("reward table has " + std::to_string(values_.size()) +
                         " entries, expected " + std::to_string(states_ * actions_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double r = values_[i];
    if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
      throw InputError("reward " + std::to_string(r) + " outside [0, 1] at " +
                       row_label(i / actions_, i % actions_));
    }
  }
}

RewardTable RewardTable::constant(std::size_t num_states, std::size_t num_actions, double value) {
  return RewardTable(num_states, num_actions,
                     std::vector<double>(num_states * num_actions, value));
}

// --- NonStationaryMdp --------------------------------------------------------------

NonStationaryMdp::NonStationaryMdp(std::vector<TransitionKernel> kernels,
                                   std::vector<RewardTable> rewards)
    : kernels_(std::move(kernels)), rewards_(std::move(rewards)) {
  if (kernels_.empty()) throw DimensionError("MDP needs at least one decision epoch");
  if (kernels_.size() != rewards_.size()) {
    throw DimensionError("MDP has " + std::to_string(kernels_.size()) + " kernels but " +
                         std::to_string(rewards_.size()) + " reward tables");
  }
  states_ = kernels_.front().num_states();
  actions_ = kernels_.front().num_actions();
  for (std::size_t t = 0; t < kernels_.size(); ++t) {
    if (kernels_[t].num_states() != states_ || kernels_[t].num_actions() != actions_ ||
        rewards_[t].num_states() != states_ || rewards_[t].num_actions() != actions_) {
      throw DimensionError("inconsistent dimensions at epoch " + std::to_string(t));
    }
  }
}

const TransitionKernel& NonStationaryMdp::kernel(Time t) const {
  if (t >= kernels_.size()) {
    throw IndexError("time " + std::to_string(t) + " beyond horizon " + std::to_string(horizon()));
  }
  return kernels_[t];
}

const RewardTable& NonStationaryMdp::reward(Time t) const {
  if (t >= rewards_.size()) {
    throw IndexError("time " + std::to_string(t) + " beyond horizon " + std::to_string(horizon()));
  }
  return rewards_[t];
}

// --- PolicySchedule ----------------------------------------------------------------

PolicySchedule::PolicySchedule(std::size_t num_epochs, std::size_t num_states, ActionId fill)
    : epochs_(num_epochs), states_(num_states), actions_(num_epochs * num_states, fill) {}

std::span<const ActionId> PolicySchedule::slice(Time t) const {
  if (t >= epochs_) throw IndexError("policy slice " + std::to_string(t));
  return {actions_.data() + t * states_, states_};
}

std::span<ActionId> PolicySchedule::slice(Time t) {
  if (t >= epochs_) throw IndexError("policy slice " + std::to_string(t));
  return {actions_.data() + t * states_, states_};
}

void PolicySchedule::validate(const NonStationaryMdp& mdp) const {
  if (epochs_ != mdp.num_epochs() || states_ != mdp.num_states()) {
    throw DimensionError("policy schedule shape does not match the MDP");
  }
  for (ActionId a : actions_) {
    if (a >= mdp.num_actions()) throw IndexError("policy action " + std::to_string(a));
  }
}

// --- StochasticMatrix --------------------------------------------------------------

StochasticMatrix::StochasticMatrix(std::size_t n, std::vector<double> entries, double tolerance)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n) throw DimensionError("stochastic matrix must be square");
  for (std::size_t i = 0; i < n_; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double p = entries_[i * n_ + j];
      if (p < -tolerance || p > 1.0 + tolerance) {
        throw InputError("matrix entry outside [0, 1] in row " + std::to_string(i));
      }
      total += p;
    }
    if (std::abs(total - 1.0) > tolerance) {
      throw InputError("matrix row " + std::to_string(i) + " sums to " + std::to_string(total));
    }
  }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return StochasticMatrix(n, std::move(e));
}

// --- span and distances ------------------------------------------------------------

double span(std::span<const double> v) {
  if (v.empty()) throw DimensionError("span of an empty vector");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

ValueVector difference(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionError("vector lengths differ");
  ValueVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

double total_variation(std::span<const Transition> p, std::span<const Transition> q) {
  // Both rows are sorted by successor.
  double acc = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < p.size() || j < q.size()) {
    if (j == q.size() || (i < p.size() && p[i].next < q[j].next)) {
      acc += p[i++].prob;
    } else if (i == p.size() || q[j].next < p[i].next) {
      acc += q[j++].prob;
    } else {
      acc += std::abs(p[i++].prob - q[j++].prob);
    }
  }
  return 0.5 * acc;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("distribution lengths differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double overlap(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("distribution lengths differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::min(p[i], q[i]);
  return acc;
}

// --- Bellman operators -------------------------------------------------------------

BellmanResult bellman_backup(const TransitionKernel& kernel, const RewardTable& reward,
                             std::span<const double> v) {
  const std::size_t S = kernel.num_states();
  const std::size_t A = kernel.num_actions();
  if (v.size() != S) {
    throw DimensionError("value vector has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(S));
  }
  BellmanResult out{ValueVector(S), std::vector<ActionId>(S, 0)};
  for (StateId s = 0; s < S; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    ActionId best_a = 0;
    for (ActionId a = 0; a < A; ++a) {
      const double q = reward(s, a) + kernel.expect(s, a, v);
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    out.values[s] = best;
    out.greedy[s] = best_a;
  }
  return out;
}

BellmanResult bellman_apply(const NonStationaryMdp& mdp, Time t, std::span<const double> v) {
  return bellman_backup(mdp.kernel(t), mdp.reward(t), v);
}

ValueVector bellman_apply_policy(const NonStationaryMdp& mdp, Time t,
                                 std::span<const ActionId> policy, std::span<const double> v) {
  const auto& kernel = mdp.kernel(t);
  const auto& reward = mdp.reward(t);
  const std::size_t S = mdp.num_states();
  if (v.size() != S || policy.size() != S) throw DimensionError("policy/value length mismatch");
  ValueVector out(S);
  for (StateId s = 0; s < S; ++s) {
    const ActionId a = policy[s];
    if (a >= mdp.num_actions()) throw IndexError("policy action " + std::to_string(a));
    out[s] = reward(s, a) + kernel.expect(s, a, v);
  }
  return out;
}

ValueVector bellman_compose(const NonStationaryMdp& mdp, Time t_start, Time t_end,
                            std::span<const double> v) {
  if (t_start > t_end) {
    throw RangeError("bellman_compose: t_start " + std::to_string(t_start) + " > t_end " +
                     std::to_string(t_end));
  }
  if (t_end > mdp.horizon()) throw IndexError("bellman_compose: t_end beyond horizon");
  ValueVector cur(v.begin(), v.end());
  for (Time t = t_end + 1; t-- > t_start;) cur = bellman_apply(mdp, t, cur).values;
  return cur;
}

StochasticMatrix kernel_under_policy(const NonStationaryMdp& mdp, Time t,
                                     std::span<const ActionId> policy) {
  const auto& kernel = mdp.kernel(t);
  const std::size_t S = mdp.num_states();
  if (policy.size() != S) throw DimensionError("policy length mismatch");
  std::vector<double> m(S * S, 0.0);
  for (StateId s = 0; s < S; ++s) {
    for (const auto& tr : kernel.row(s, policy[s])) m[s * S + tr.next] = tr.prob;
  }
  return StochasticMatrix(S, std::move(m));
}

StochasticMatrix kernel_compose(std::span<const StochasticMatrix> matrices) {
  if (matrices.empty()) throw DimensionError("kernel_compose of an empty sequence");
  const std::size_t n = matrices.front().size();
  std::vector<double> acc(matrices.front().entries().begin(), matrices.front().entries().end());
  std::vector<double> next(n * n);
  for (std::size_t m = 1; m < matrices.size(); ++m) {
    const auto& rhs = matrices[m];
    if (rhs.size() != n) throw DimensionError("kernel_compose: dimension mismatch");
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double a = acc[i * n + k];
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i * n + j] += a * rhs(k, j);
      }
    }
    acc.swap(next);
  }
  return StochasticMatrix(n, std::move(acc));
}

}  // namespace mpdp
