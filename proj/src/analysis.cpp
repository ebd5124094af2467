#include "mpdp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "mpdp/forecast.hpp"

namespace mpdp {

namespace {

using Rows = std::vector<std::vector<double>>;

void check_window(const NonStationaryMdp& mdp, Time t, std::size_t J) {
  if (J == 0) throw InputError("contraction window J must be at least 1");
  if (t + J > mdp.num_epochs()) {
    throw RangeError("window [" + std::to_string(t) + ", " + std::to_string(t + J - 1) +
                     "] runs past horizon " + std::to_string(mdp.horizon()));
  }
}

// acc (S x S) times the kernel restricted to one policy slice.
std::vector<double> times_policy_kernel(const std::vector<double>& acc, const TransitionKernel& kernel,
                                        std::span<const ActionId> slice) {
  const std::size_t S = kernel.num_states();
  std::vector<double> out(S * S, 0.0);
  for (StateId k = 0; k < S; ++k) {
    const auto row = kernel.row(k, slice[k]);
    for (StateId i = 0; i < S; ++i) {
      const double a = acc[i * S + k];
      if (a == 0.0) continue;
      for (const auto& tr : row) out[i * S + tr.next] += a * tr.prob;
    }
  }
  return out;
}

std::vector<ActionId> decode_slice(std::uint64_t code, std::size_t S, std::size_t A) {
  std::vector<ActionId> slice(S);
  for (StateId s = 0; s < S; ++s) {
    slice[s] = code % A;
    code /= A;
  }
  return slice;
}

std::vector<double> identity_matrix(std::size_t S) {
  std::vector<double> m(S * S, 0.0);
  for (std::size_t i = 0; i < S; ++i) m[i * S + i] = 1.0;
  return m;
}

void enumerate_rows(const NonStationaryMdp& mdp, Time t, std::size_t depth, std::size_t J,
                    const std::vector<double>& acc, std::uint64_t slices, Rows& out) {
  const std::size_t S = mdp.num_states();
  if (depth == J) {
    for (StateId s = 0; s < S; ++s) out.emplace_back(acc.begin() + s * S, acc.begin() + (s + 1) * S);
    return;
  }
  for (std::uint64_t code = 0; code < slices; ++code) {
    const auto slice = decode_slice(code, S, mdp.num_actions());
    enumerate_rows(mdp, t, depth + 1, J, times_policy_kernel(acc, mdp.kernel(t + depth), slice),
                   slices, out);
  }
}

double min_pairwise_overlap(const Rows& rows) {
  double best = 1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) best = std::min(best, overlap(rows[i], rows[j]));
  }
  return best;
}

double min_cross_overlap(const std::vector<double>& m1, const std::vector<double>& m2, std::size_t S) {
  double best = 1.0;
  for (StateId s1 = 0; s1 < S; ++s1) {
    for (StateId s2 = 0; s2 < S; ++s2) {
      best = std::min(best, overlap(std::span(m1).subspan(s1 * S, S), std::span(m2).subspan(s2 * S, S)));
    }
  }
  return best;
}

}  // namespace

const char* to_string(CertificateMethod m) {
  return m == CertificateMethod::exhaustive ? "exhaustive" : "sampled";
}

ContractionMode ContractionMode::exhaustive(std::uint64_t budget) {
  ContractionMode m;
  m.method = CertificateMethod::exhaustive;
  m.budget = budget;
  return m;
}

ContractionMode ContractionMode::sampled(std::uint64_t samples, std::uint64_t seed) {
  ContractionMode m;
  m.method = CertificateMethod::sampled;
  m.samples = samples;
  m.seed = seed;
  return m;
}

double eta_coefficient(const NonStationaryMdp& mdp, Time t, std::size_t J,
                       const PolicySchedule& first, const PolicySchedule& second) {
  check_window(mdp, t, J);
  first.validate(mdp);
  second.validate(mdp);
  const std::size_t S = mdp.num_states();
  auto m1 = identity_matrix(S);
  auto m2 = identity_matrix(S);
  for (std::size_t j = 0; j < J; ++j) {
    m1 = times_policy_kernel(m1, mdp.kernel(t + j), first.slice(t + j));
    m2 = times_policy_kernel(m2, mdp.kernel(t + j), second.slice(t + j));
  }
  return min_cross_overlap(m1, m2, S);
}

ContractionCertificate contraction_coefficient(const NonStationaryMdp& mdp, std::size_t J,
                                               const ContractionMode& mode) {
  check_window(mdp, 0, J);
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  ContractionCertificate cert;
  cert.J = J;
  cert.method = mode.method;
  cert.windows = mdp.num_epochs() - J + 1;
  double min_eta = 1.0;

  if (mode.method == CertificateMethod::exhaustive) {
    const double log_policies = static_cast<double>(S * J) * std::log(static_cast<double>(A));
    const double log_budget = std::log(static_cast<double>(std::max<std::uint64_t>(mode.budget, 1)));
    if (2.0 * log_policies > log_budget + 1e-9) {
      throw BudgetError("exhaustive contraction check needs |A|^(2|S|J) = " +
                        std::to_string(A) + "^" + std::to_string(2 * S * J) +
                        " policy pairs per window, above the budget of " +
                        std::to_string(mode.budget) + "; use sampled mode");
    }
    std::uint64_t slices = 1;
    for (std::size_t s = 0; s < S; ++s) slices *= A;
    std::uint64_t policies = 1;
    for (std::size_t j = 0; j < J; ++j) policies *= slices;

    for (Time t = 0; t + J <= mdp.num_epochs(); ++t) {
      Rows rows;
      enumerate_rows(mdp, t, 0, J, identity_matrix(S), slices, rows);
      std::sort(rows.begin(), rows.end());
      rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
      min_eta = std::min(min_eta, min_pairwise_overlap(rows));
      cert.policy_pairs_examined += policies * policies;
    }
  } else {
    if (mode.samples == 0) throw InputError("sampled contraction mode needs at least one sample");
    Rng rng(mode.seed);
    std::uniform_int_distribution<ActionId> pick(0, A - 1);
    for (Time t = 0; t + J <= mdp.num_epochs(); ++t) {
      for (std::uint64_t n = 0; n < mode.samples; ++n) {
        auto m1 = identity_matrix(S);
        auto m2 = identity_matrix(S);
        std::vector<ActionId> slice(S);
        for (std::size_t j = 0; j < J; ++j) {
          for (auto& a : slice) a = pick(rng);
          m1 = times_policy_kernel(m1, mdp.kernel(t + j), slice);
          for (auto& a : slice) a = pick(rng);
          m2 = times_policy_kernel(m2, mdp.kernel(t + j), slice);
        }
        min_eta = std::min(min_eta, min_cross_overlap(m1, m2, S));
        ++cert.policy_pairs_examined;
      }
    }
  }
  cert.gamma = std::clamp(1.0 - min_eta, 0.0, 1.0);
  return cert;
}

ContractionReport verify_contraction(const NonStationaryMdp& mdp,
                                     const ContractionCertificate& certificate,
                                     std::size_t trials, std::uint64_t seed) {
  check_window(mdp, 0, certificate.J);
  if (!(certificate.gamma >= 0.0 && certificate.gamma <= 1.0)) {
    throw InputError("certificate gamma outside [0, 1]");
  }
  const std::size_t S = mdp.num_states();
  const std::size_t J = certificate.J;
  ContractionReport report;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ValueVector u(S);
    ValueVector v(S);
    const double su = std::pow(10.0, log_scale(rng));
    const double sv = std::pow(10.0, log_scale(rng));
    for (auto& x : u) x = su * unit(rng);
    for (auto& x : v) x = sv * unit(rng);
    const double input = span(difference(u, v));
    for (Time t = 0; t + J <= mdp.num_epochs(); ++t) {
      const auto lu = bellman_compose(mdp, t, t + J - 1, u);
      const auto lv = bellman_compose(mdp, t, t + J - 1, v);
      const double output = span(difference(lu, lv));
      ++report.checks;
      if (input > 0.0) report.max_ratio = std::max(report.max_ratio, output / input);
      if (output > certificate.gamma * input + 1e-9) ++report.violations;
    }
  }
  report.ok = report.violations == 0;
  if (!report.ok) {
    report.message = std::to_string(report.violations) + " of " + std::to_string(report.checks) +
                     " span checks exceed gamma = " + std::to_string(certificate.gamma);
    if (certificate.method == CertificateMethod::exhaustive) {
      report.message += " (exhaustive certificate: invariant failure)";
    }
  }
  return report;
}

DiameterEstimate diameter(const NonStationaryMdp& mdp, const std::vector<ValueVector>& optimal_values,
                          Time cutoff) {
  const std::size_t epochs = mdp.num_epochs();
  const std::size_t S = mdp.num_states();
  if (optimal_values.size() < epochs) {
    throw InputError("diameter needs optimal values for every epoch 0..T; got " +
                     std::to_string(optimal_values.size()));
  }
  if (cutoff > mdp.horizon()) throw InputError("diameter cutoff beyond the horizon");
  DiameterEstimate est;
  est.cutoff = cutoff;
  est.target_sequence.resize(epochs);
  for (Time t = 0; t < epochs; ++t) {
    const auto& v = optimal_values[t];
    if (v.size() != S) throw DimensionError("optimal value vector has the wrong length");
    est.target_sequence[t] = static_cast<StateId>(std::max_element(v.begin(), v.end()) - v.begin());
  }

  // hit[t][s]: minimal expected steps from (t, s) to the first later epoch whose state is
  // the target. escape[t][s]: under that minimising policy, probability of reaching the
  // end of the horizon without meeting a target before epoch T+1.
  std::vector<ValueVector> hit(epochs + 1, ValueVector(S, 0.0));
  std::vector<ValueVector> escape(epochs + 1, ValueVector(S, 1.0));
  for (Time t = epochs; t-- > 0;) {
    const auto& kernel = mdp.kernel(t);
    const bool last = t + 1 == epochs;
    for (StateId s = 0; s < S; ++s) {
      double best = std::numeric_limits<double>::infinity();
      double best_escape = 1.0;
      for (ActionId a = 0; a < mdp.num_actions(); ++a) {
        double h = 1.0;
        double e = 0.0;
        for (const auto& tr : kernel.row(s, a)) {
          if (last) {
            e += tr.prob;
          } else if (tr.next != est.target_sequence[t + 1]) {
            h += tr.prob * hit[t + 1][tr.next];
            e += tr.prob * escape[t + 1][tr.next];
          }
        }
        if (h < best) {
          best = h;
          best_escape = e;
        }
      }
      hit[t][s] = best;
      escape[t][s] = best_escape;
    }
  }

  double worst = 0.0;
  double worst_escape = 0.0;
  for (Time t = 0; t + cutoff < epochs; ++t) {
    for (StateId s = 0; s < S; ++s) {
      if (hit[t][s] > worst) {
        worst = hit[t][s];
        worst_escape = escape[t][s];
      }
    }
  }
  est.D = worst;
  est.truncated = worst_escape > 1e-12;
  return est;
}

double stationary_diameter(const NonStationaryMdp& mdp, double tolerance,
                           std::size_t max_iterations) {
  const auto& kernel = mdp.kernel(0);
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();

  // Reachability over the union of supports; an unreachable pair has infinite diameter.
  for (StateId g = 0; g < S; ++g) {
    std::vector<bool> reaches(S, false);
    std::queue<StateId> frontier;
    for (StateId s = 0; s < S; ++s) {
      for (ActionId a = 0; a < A && !reaches[s]; ++a) {
        for (const auto& tr : kernel.row(s, a)) {
          if (tr.next == g) {
            reaches[s] = true;
            frontier.push(s);
            break;
          }
        }
      }
    }
    while (!frontier.empty()) {
      const StateId x = frontier.front();
      frontier.pop();
      for (StateId s = 0; s < S; ++s) {
        if (reaches[s]) continue;
        for (ActionId a = 0; a < A && !reaches[s]; ++a) {
          for (const auto& tr : kernel.row(s, a)) {
            if (tr.next == x) {
              reaches[s] = true;
              frontier.push(s);
              break;
            }
          }
        }
      }
    }
    if (std::find(reaches.begin(), reaches.end(), false) != reaches.end()) {
      return std::numeric_limits<double>::infinity();
    }
  }

  double worst = 0.0;
  for (StateId g = 0; g < S; ++g) {
    ValueVector h(S, 0.0);
    ValueVector next(S, 0.0);
    bool converged = false;
    for (std::size_t it = 0; it < max_iterations && !converged; ++it) {
      double change = 0.0;
      for (StateId s = 0; s < S; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (ActionId a = 0; a < A; ++a) {
          double value = 1.0;
          for (const auto& tr : kernel.row(s, a)) {
            if (tr.next != g) value += tr.prob * h[tr.next];
          }
          best = std::min(best, value);
        }
        next[s] = best;
        change = std::max(change, std::abs(best - h[s]) / std::max(1.0, best));
      }
      h.swap(next);
      converged = change < tolerance;
    }
    if (!converged) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, *std::max_element(h.begin(), h.end()));
  }
  return worst;
}

DiameterReport verify_diameter_bound(const std::vector<ValueVector>& optimal_values, double D) {
  DiameterReport report;
  for (Time t = 0; t < optimal_values.size(); ++t) {
    const double s = span(optimal_values[t]);
    if (s > report.max_span) {
      report.max_span = s;
      report.worst_time = t;
    }
  }
  report.ok = report.max_span <= D + 1e-9;
  if (!report.ok) {
    report.message = "span(V_" + std::to_string(report.worst_time) + "*) = " +
                     std::to_string(report.max_span) + " exceeds D = " + std::to_string(D);
  }
  return report;
}

std::size_t regret_bound_profile_length(std::size_t k, std::size_t J) {
  if (J == 0) throw InputError("J must be at least 1");
  const std::size_t ceil_blocks = (k + J - 1) / J;
  return std::max(J * ceil_blocks, k) + 1;
}

RegretBound regret_bound(double T, std::size_t k, std::size_t J, double gamma, double D,
                         std::span<const double> eps, std::span<const double> delta) {
  if (J == 0) throw InputError("J must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  if (!(D >= 0.0) || !(T >= 0.0)) throw InputError("T and D must be non-negative");
  const std::size_t needed = regret_bound_profile_length(k, J);
  if (eps.size() < needed || delta.size() < needed) {
    throw InputError("regret_bound(k=" + std::to_string(k) + ", J=" + std::to_string(J) +
                     ") reads eps/delta indices 0.." + std::to_string(needed - 1) + " but got " +
                     std::to_string(eps.size()) + " eps and " + std::to_string(delta.size()) +
                     " delta entries");
  }
  ErrorProfile profile{std::vector<double>(eps.begin(), eps.end()),
                       std::vector<double>(delta.begin(), delta.end())};
  for (std::size_t l = 0; l < profile.size(); ++l) {
    if (!(profile.eps[l] >= 0.0) || !(profile.delta[l] >= 0.0)) {
      throw InputError("eps/delta entries must be non-negative");
    }
  }
  const std::size_t floor_blocks = k / J;
  const std::size_t ceil_blocks = (k + J - 1) / J;
  const double g_floor = std::pow(gamma, static_cast<double>(floor_blocks));

  RegretBound b;
  b.noise_free_term = T * g_floor * D;
  b.eps0_term = 2.0 * T * profile.eps[0];
  b.delta0_term = 2.0 * T * profile.delta[0] * D;
  double geometric = 0.0;
  for (std::size_t i = 0; i < ceil_blocks; ++i) {
    geometric += std::pow(gamma, static_cast<double>(i)) * profile.block_error(i * J, J, D);
  }
  b.geometric_term = 4.0 * T * geometric;
  b.tail_term = 4.0 * T * g_floor * profile.block_error(floor_blocks * J, k % J, D);
  b.total = b.noise_free_term + b.eps0_term + b.geometric_term + b.delta0_term + b.tail_term;
  return b;
}

CounterExample counterexample_mdp(std::size_t k, Time T, Rng& rng) {
  if (k + 1 >= T) {
    throw InputError("counter-example needs k + 1 < T (got k = " + std::to_string(k) +
                     ", T = " + std::to_string(T) + ")");
  }
  std::bernoulli_distribution coin(0.5);
  CounterExample ce;
  ce.start = 0;
  ce.hidden_target = coin(rng) ? 2 : 1;

  constexpr std::size_t S = 3;
  constexpr std::size_t A = 2;
  std::vector<std::vector<Transition>> rows(S * A);
  rows[0 * A + 0] = {{1, 1.0}};
  rows[0 * A + 1] = {{2, 1.0}};
  for (ActionId a = 0; a < A; ++a) {
    rows[1 * A + a] = {{1, 1.0}};
    rows[2 * A + a] = {{2, 1.0}};
  }
  const TransitionKernel kernel(S, A, std::move(rows));

  std::vector<TransitionKernel> kernels(T + 1, kernel);
  std::vector<RewardTable> rewards;
  rewards.reserve(T + 1);
  for (Time t = 0; t <= T; ++t) {
    std::vector<double> r(S * A, 0.0);
    if (t >= k + 2) {
      for (ActionId a = 0; a < A; ++a) r[ce.hidden_target * A + a] = 1.0;
    }
    rewards.emplace_back(S, A, std::move(r));
  }
  ce.mdp = NonStationaryMdp(std::move(kernels), std::move(rewards));
  return ce;
}

}  // namespace mpdp
