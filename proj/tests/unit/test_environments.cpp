#include <doctest.h>

#include <cmath>
#include <queue>
#include <set>

#include "mpdp/analysis.hpp"
#include "mpdp/environments.hpp"
#include "mpdp/planner.hpp"
#include "support/oracles.hpp"

using namespace mpdp;

namespace {

QueueConfig small_queue(std::size_t cap, Time T) {
  QueueConfig cfg;
  cfg.queue_cap = cap;
  cfg.horizon = T;
  cfg.arrival_rate = sinusoid_rate(10, 100, 50);
  return cfg;
}

EvConfig one_ev_cheap_late() {
  EvConfig cfg;
  cfg.num_stands = 1;
  cfg.rate_cap = 1;
  cfg.station_cap = 1;
  cfg.horizon = 2;
  cfg.price = [](Time t) { return t == 0 ? 18.0 : 2.0; };
  cfg.arrivals = {{0, 3, 2.0}};
  return cfg;
}

EvConfig busy_station() {
  EvConfig cfg;
  cfg.horizon = 12;
  cfg.price = square_wave_price(2, 18, 8);
  cfg.arrivals = {{0, 4, 2}, {0, 6, 3}, {1, 3, 1}, {2, 9, 4}, {4, 8, 2}, {5, 12, 3}, {7, 13, 2}, {9, 11, 1}};
  return cfg;
}

}  // namespace

TEST_SUITE("environments") {

TEST_CASE("queue codec round trip") {
  const QueueCodec codec(3, 20);
  CHECK(codec.num_states() == 21 * 8);
  CHECK(codec.num_actions() == 4);
  for (StateId s = 0; s < codec.num_states(); ++s) CHECK(codec.encode(codec.decode(s)) == s);
  const QueueState q{7, 0b101};
  const auto back = codec.decode(codec.encode(q));
  CHECK(back.queue == 7);
  CHECK(back.busy == 0b101u);
  CHECK_THROWS_AS(codec.encode({21, 0}), IndexError);
  CHECK_THROWS_AS(codec.decode(codec.num_states()), IndexError);
}

TEST_CASE("queue without arrivals stays empty") {
  QueueConfig cfg = small_queue(3, 4);
  cfg.arrival_rate = [](Time) { return 0.0; };
  const auto env = build_queueing_mdp(cfg);
  for (ActionId a = 0; a < env.codec.num_actions(); ++a) {
    const auto row = env.mdp.kernel(2).row(env.initial_state, a);
    REQUIRE(row.size() == 1);
    CHECK(row[0].next == env.initial_state);
    CHECK(env.mdp.reward(2)(env.initial_state, a) == 1.0);
  }
}

TEST_CASE("single-server queue matches the hand-enumerated event tree") {
  QueueConfig cfg;
  cfg.service_rates = {2.0};
  cfg.queue_cap = 2;
  cfg.horizon = 3;
  cfg.arrival_rate = [](Time) { return 1.0; };
  const auto env = build_queueing_mdp(cfg);
  const auto& c = env.codec;
  const auto& k = env.mdp.kernel(1);
  const ActionId serve = 0, wait = 1;
  const StateId empty = c.encode({0, 0}), one_idle = c.encode({1, 0}), two_busy = c.encode({2, 1});
  // Empty and idle: an arrival (1/3) is dispatched at once when serving, else it waits.
  CHECK(k.prob(empty, wait, one_idle) == doctest::Approx(1.0 / 3));
  CHECK(k.prob(empty, wait, empty) == doctest::Approx(2.0 / 3));
  CHECK(k.prob(empty, serve, c.encode({0, 1})) == doctest::Approx(1.0 / 3));
  CHECK(k.prob(empty, serve, empty) == doctest::Approx(2.0 / 3));
  // One waiting job dispatched: arrival leaves one queued; otherwise the server finishes.
  CHECK(k.prob(one_idle, serve, c.encode({1, 1})) == doctest::Approx(1.0 / 3));
  CHECK(k.prob(one_idle, serve, empty) == doctest::Approx(2.0 / 3));
  CHECK(k.row(one_idle, serve).size() == 2);
  // Full queue: the arrival is dropped.
  CHECK(k.prob(two_busy, wait, two_busy) == doctest::Approx(1.0 / 3));
  CHECK(k.prob(two_busy, wait, c.encode({2, 0})) == doctest::Approx(2.0 / 3));
  CHECK(k.row(two_busy, serve).size() == k.row(two_busy, wait).size());
  // Occupancy reward.
  CHECK(env.mdp.reward(0)(two_busy, wait) == doctest::Approx(0.0));
  CHECK(env.mdp.reward(0)(one_idle, wait) == doctest::Approx(1.0 - 1.0 / 3.0));
}

TEST_CASE("paper queue configuration") {
  const auto env = build_queueing_mdp(small_queue(20, 200));
  CHECK(env.config.service_rates == std::vector<double>{100, 10, 1});
  CHECK(env.mdp.num_states() == 168);
  CHECK(env.mdp.num_actions() == 4);
  double lo = 1e9, hi = 0;
  for (Time t = 0; t <= 200; ++t) {
    lo = std::min(lo, env.config.arrival_rate(t));
    hi = std::max(hi, env.config.arrival_rate(t));
  }
  CHECK(lo == doctest::Approx(10));
  CHECK(hi == doctest::Approx(100));
  for (Time t : {0u, 13u, 25u, 199u}) {
    const auto& k = env.mdp.kernel(t);
    for (StateId s = 0; s < 168; ++s)
      for (ActionId a = 0; a < 4; ++a) {
        double total = 0.0;
        for (const auto& tr : k.row(s, a)) total += tr.prob;
        CHECK(std::abs(total - 1.0) <= 1e-12);
      }
  }
}

TEST_CASE("kernel factory agrees with the direct construction") {
  const auto cfg = small_queue(5, 3);
  const auto env = build_queueing_mdp(cfg);
  for (double lambda : {0.0, 0.5, 10.0, 73.25, 100.0}) {
    const auto fast = (*env.kernels)(lambda);
    const auto slow = queue_kernel(cfg, env.codec, lambda);
    const auto x = fast.to_dense(), y = slow.to_dense();
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) <= 1e-15);
  }
  CHECK_THROWS_AS((*env.kernels)(-1.0), InputError);
}

TEST_CASE("queue config validation and sizing") {
  auto cfg = small_queue(20, 10);
  cfg.service_rates = {1.0, 0.0};
  CHECK_THROWS_AS(build_queueing_mdp(cfg), ConfigError);
  cfg = small_queue(0, 10);
  CHECK_THROWS_AS(build_queueing_mdp(cfg), ConfigError);
  cfg = small_queue(20, 10);
  cfg.max_states = 100;
  CHECK_THROWS_AS(build_queueing_mdp(cfg), BudgetError);
  const auto size = size_queueing(small_queue(20, 200));
  CHECK(size.num_states == 168);
  CHECK(size.num_actions == 4);
  CHECK(size.horizon == 200);
}

TEST_CASE("one EV with a late price drop charges late") {
  const auto env = build_ev_mdp(one_ev_cheap_late());
  const auto sol = solve_optimal(env.mdp);
  const auto energy = ev_energy_profile(env, sol.pi_star);
  CHECK(energy == std::vector<double>{0.0, 1.0, 1.0});
  CHECK(low_price_energy_fraction(env, energy) == 1.0);
  // Exhaustive check over every schedule: the best one has the same value.
  CHECK(oracle::best_values_by_enumeration(env.mdp)[env.initial_state] == doctest::Approx(sol.v_star[0][env.initial_state]));
}

TEST_CASE("constant price makes every schedule equally good") {
  auto cfg = busy_station();
  cfg.price = [](Time) { return 10.0; };
  const auto env = build_ev_mdp(cfg);
  const double opt = solve_optimal(env.mdp).v_star[0][env.initial_state];
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PolicySchedule pi(env.mdp.num_epochs(), env.mdp.num_states());
    Rng rng(seed);
    for (Time t = 0; t < pi.num_epochs(); ++t)
      for (StateId s = 0; s < pi.num_states(); ++s) pi.set(t, s, rng() % env.actions.size());
    CHECK(evaluate_policy_exact(env.mdp, pi, env.initial_state) == doctest::Approx(opt).epsilon(1e-12));
  }
}

TEST_CASE("EV station invariants") {
  const auto cfg = busy_station();
  const auto env = build_ev_mdp(cfg);
  CHECK(env.actions.size() == 7);  // rate vectors in {0,1}^3 with sum <= 2
  for (const auto& act : env.actions) {
    std::size_t sum = 0;
    for (auto r : act) sum += r;
    CHECK(sum <= 2);
  }
  for (StateId s = 0; s < env.codec.num_states(); ++s) CHECK(env.codec.encode(env.codec.decode(s)) == s);

  // Every reachable state keeps a non-empty feasible action set and all demand is met.
  std::set<StateId> frontier{env.initial_state};
  for (Time t = 0; t <= cfg.horizon; ++t) {
    std::set<StateId> next;
    for (StateId s : frontier) {
      CHECK(env.feasible[t][s]);
      bool any = false;
      for (ActionId a = 0; a < env.actions.size(); ++a) {
        any = any || env.action_feasible(t, s, a);
        next.insert(env.mdp.kernel(t).row(s, a).front().next);
      }
      CHECK(any);
    }
    frontier = next;
  }
  double demanded = 0.0;
  for (std::size_t i = 0; i < cfg.arrivals.size(); ++i)
    if (env.stand_of[i] != kNoStand) demanded += cfg.arrivals[i].energy;
  PolicySchedule greedy(env.mdp.num_epochs(), env.mdp.num_states(), env.actions.size() - 1);
  double delivered = 0.0;
  for (double e : ev_energy_profile(env, greedy)) delivered += e;
  CHECK(delivered == demanded);
}

TEST_CASE("stand assignment turns EVs away when full") {
  const std::vector<EvArrival> arrivals{{0, 5, 1}, {1, 3, 1}, {2, 4, 1}, {3, 6, 1}};
  const auto stand = assign_stands(arrivals, 2);
  CHECK(stand == std::vector<std::size_t>{0, 1, kNoStand, 1});
}

TEST_CASE("EV config validation") {
  auto cfg = one_ev_cheap_late();
  cfg.arrivals = {{0, 2, 3.0}};
  CHECK_THROWS_AS(build_ev_mdp(cfg), ConfigError);
  cfg.arrivals = {{2, 2, 1.0}};
  CHECK_THROWS_AS(build_ev_mdp(cfg), ConfigError);
  cfg.arrivals = {{0, 2, 1.5}};
  CHECK_THROWS_AS(build_ev_mdp(cfg), ConfigError);
  // Two EVs whose joint demand the station cap cannot meet.
  EvConfig tight;
  tight.num_stands = 2;
  tight.station_cap = 1;
  tight.horizon = 3;
  tight.price = [](Time) { return 5.0; };
  tight.arrivals = {{0, 2, 2}, {0, 2, 1}};
  CHECK_THROWS_AS(build_ev_mdp(tight), ConfigError);
}

TEST_CASE("paper price path") {
  const auto price = square_wave_price(2, 18, 24);
  double lo = 1e9, hi = 0;
  std::size_t low = 0;
  for (Time t = 0; t < 48; ++t) {
    lo = std::min(lo, price(t));
    hi = std::max(hi, price(t));
    low += price(t) < 8.0;
  }
  CHECK(lo >= 2.0);
  CHECK(hi <= 18.0);
  CHECK(lo < 3.0);
  CHECK(hi > 17.0);
  CHECK((low > 12 && low < 36));
}

TEST_CASE("sampled arrivals are servable and reproducible") {
  EvConfig base;
  base.price = square_wave_price(2, 18, 24);
  const EvArrivalModel model{0.5, 2, 10, 4};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    const auto x = sample_ev_arrivals(base, model, a);
    const auto y = sample_ev_arrivals(base, model, b);
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK((x[i].arrival == y[i].arrival && x[i].departure == y[i].departure && x[i].energy == y[i].energy));
    auto cfg = base;
    cfg.arrivals = x;
    CHECK_NOTHROW(build_ev_mdp(cfg));
  }
}

TEST_CASE("random ergodic generator") {
  const auto a = random_ergodic_mdp(4, 2, 5, 0.3, 17);
  CHECK(a == random_ergodic_mdp(4, 2, 5, 0.3, 17));
  CHECK_FALSE(a == random_ergodic_mdp(4, 2, 5, 0.3, 18));
  const auto u = random_ergodic_mdp(3, 2, 4, 1.0, 1);
  CHECK(contraction_coefficient(u, 1, ContractionMode::exhaustive()).gamma == doctest::Approx(0.0).epsilon(1e-12));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_ergodic_mdp(4, 2, 3, 0.3, seed);
    CHECK(contraction_coefficient(m, 1, ContractionMode::exhaustive()).gamma <= 0.7 + 1e-12);
    for (Time t = 0; t <= 3; ++t)
      for (StateId s = 0; s < 4; ++s)
        for (ActionId x = 0; x < 2; ++x) CHECK((m.reward(t)(s, x) >= 0.0 && m.reward(t)(s, x) <= 1.0));
  }
  CHECK_THROWS_AS(random_ergodic_mdp(3, 2, 4, 0.0, 1), InputError);
}

}  // TEST_SUITE
