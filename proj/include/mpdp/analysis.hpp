#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpdp/core.hpp"
#include "mpdp/rng.hpp"

namespace mpdp {

// A contraction window of length J covers the J consecutive epochs t, ..., t+J-1,
// i.e. the composite L_t o ... o L_{t+J-1} and the product P_t^{pi_t} ... P_{t+J-1}^{pi_{t+J-1}}.
// Window starts run over t = 0..T+1-J.

enum class CertificateMethod { exhaustive, sampled };

const char* to_string(CertificateMethod m);

struct ContractionCertificate {
  std::size_t J = 1;
  double gamma = 1.0;
  CertificateMethod method = CertificateMethod::exhaustive;
  std::uint64_t policy_pairs_examined = 0;
  std::size_t windows = 0;
};

struct ContractionMode {
  CertificateMethod method = CertificateMethod::exhaustive;
  std::uint64_t samples = 0;        // policy pairs per window in sampled mode
  std::uint64_t budget = 1'000'000;  // max policy pairs per window in exhaustive mode
  std::uint64_t seed = 0;

  static ContractionMode exhaustive(std::uint64_t budget = 1'000'000);
  static ContractionMode sampled(std::uint64_t samples, std::uint64_t seed);
};

/// min over state pairs (s1, s2) of sum_j min{ M1(j|s1), M2(j|s2) } where M_i is the
/// J-step product under schedule i starting at epoch t. Throws RangeError when the
/// window runs past the horizon.
double eta_coefficient(const NonStationaryMdp& mdp, Time t, std::size_t J,
                       const PolicySchedule& first, const PolicySchedule& second);

/// gamma = 1 - min eta over every window start and every examined policy pair.
/// Exhaustive mode enumerates all deterministic policies on each window and throws
/// BudgetError when |A|^(2 |S| J) exceeds the budget. Sampled mode is an estimate,
/// not a certificate.
ContractionCertificate contraction_coefficient(const NonStationaryMdp& mdp, std::size_t J,
                                               const ContractionMode& mode);

struct ContractionReport {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  double max_ratio = 0.0;  // max span(Lu - Lv) / span(u - v) over checks with span(u - v) > 0
  bool ok = true;
  std::string message;
};

/// Checks span(L_{t:t+J-1} u - L_{t:t+J-1} v) <= gamma span(u - v) + 1e-9 on random
/// pairs for every window start.
ContractionReport verify_contraction(const NonStationaryMdp& mdp,
                                     const ContractionCertificate& certificate,
                                     std::size_t trials, std::uint64_t seed);

struct DiameterEstimate {
  double D = 0.0;
  std::vector<StateId> target_sequence;  // argmax_s V_t*(s), t = 0..T
  Time cutoff = 0;
  bool truncated = false;  // the worst start can run off the horizon before meeting a target
  std::string method = "exact-dp";
};

/// Worst-case minimal expected time (at least one step) to meet the moving target
/// argmax V_t*, maximised over start states and start times t <= T - cutoff. Every
/// state counts as a target at epoch T+1, where V* vanishes.
DiameterEstimate diameter(const NonStationaryMdp& mdp, const std::vector<ValueVector>& optimal_values,
                          Time cutoff = 0);

/// Classical diameter of the epoch-0 dynamics viewed as a stationary MDP: the largest
/// minimal expected first-passage time (at least one step) between any two states.
/// Returns +inf when some state cannot reach another.
double stationary_diameter(const NonStationaryMdp& mdp, double tolerance = 1e-12,
                           std::size_t max_iterations = 1'000'000);

struct DiameterReport {
  double max_span = 0.0;
  Time worst_time = 0;
  bool ok = true;
  std::string message;
};

/// Checks span(V_t*) <= D + 1e-9 for every t.
DiameterReport verify_diameter_bound(const std::vector<ValueVector>& optimal_values, double D);

struct RegretBound {
  double total = 0.0;
  double noise_free_term = 0.0;
  double eps0_term = 0.0;
  double delta0_term = 0.0;
  double geometric_term = 0.0;
  double tail_term = 0.0;
};

/// Regret bound for receding-horizon planning with a k-step forecast:
///   T g^{floor(k/J)} D + 2T eps_0 + 2T delta_0 D
///   + 4T sum_{i=0}^{ceil(k/J)-1} g^i sum_{j=1}^{J} (eps_{iJ+j} + delta_{iJ+j} D)
///   + 4T g^{floor(k/J)} sum_{j=1}^{k%J} (eps_{floor(k/J)J+j} + delta_{floor(k/J)J+j} D).
/// eps and delta must cover every index the sums touch, J*ceil(k/J) at most; a short
/// sequence is an InputError.
RegretBound regret_bound(double T, std::size_t k, std::size_t J, double gamma, double D,
                         std::span<const double> eps, std::span<const double> delta);

/// Number of eps/delta entries regret_bound reads for (k, J).
std::size_t regret_bound_profile_length(std::size_t k, std::size_t J);

struct CounterExample {
  NonStationaryMdp mdp;
  StateId start = 0;
  StateId hidden_target = 1;  // the sink that pays from epoch k+2 on
};

/// Three states: a start with two actions leading to two absorbing sinks. One sink,
/// drawn uniformly from rng, pays reward 1 at every epoch t >= k+2. Requires k+1 < T.
CounterExample counterexample_mdp(std::size_t k, Time T, Rng& rng);

}  // namespace mpdp
