#include <doctest.h>

#include <cmath>
#include <random>

#include "mpdp/core.hpp"
#include "support/oracles.hpp"

using namespace mpdp;

namespace {

NonStationaryMdp one_state(double r) {
  return NonStationaryMdp({TransitionKernel::identity(1, 1)}, {RewardTable::constant(1, 1, r)});
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("span of simple vectors") {
  CHECK(span(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK(span(std::vector<double>{4.5, 4.5, 4.5, 4.5}) == 0.0);
  std::vector<double> v{0.7, -0.2, 0.4};
  CHECK(span(v) == doctest::Approx(0.9).epsilon(1e-15));
  for (auto& x : v) x += 5.0;
  CHECK(span(v) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK_THROWS_AS(span(std::vector<double>{}), DimensionError);
}

TEST_CASE("span axioms on random vectors") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 50);
  std::uniform_real_distribution<double> scalar(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = dim(rng);
    const auto u = oracle::random_vector(rng, n, -5.0, 5.0);
    const auto v = oracle::random_vector(rng, n, -5.0, 5.0);
    const double c = scalar(rng);
    std::vector<double> sum(n), scaled(n), shifted(n), neg(n);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] = u[i] + v[i];
      scaled[i] = c * u[i];
      shifted[i] = u[i] + c;
      neg[i] = -u[i];
      norm2 += u[i] * u[i];
    }
    CHECK(span(u) >= 0.0);
    CHECK(span(sum) <= span(u) + span(v) + 1e-10);
    CHECK(std::abs(span(scaled) - std::abs(c) * span(u)) <= 1e-10);
    CHECK(std::abs(span(shifted) - span(u)) <= 1e-10);
    CHECK(std::abs(span(neg) - span(u)) <= 1e-10);
    CHECK(span(u) <= 2.0 * std::sqrt(norm2) + 1e-10);
  }
}

TEST_CASE("kernel construction refuses non-stochastic rows") {
  CHECK_THROWS_AS(TransitionKernel::from_dense(2, 1, std::vector<double>{0.5, 0.4, 0, 1}), InputError);
  CHECK_THROWS_AS(TransitionKernel::from_dense(2, 1, std::vector<double>{1.2, -0.2, 0, 1}), InputError);
  CHECK_THROWS_AS(TransitionKernel::from_dense(2, 1, std::vector<double>{1, 0, 0}), DimensionError);
  CHECK_THROWS_AS(TransitionKernel(2, 1, {{{5, 1.0}}, {{0, 1.0}}}), IndexError);
  CHECK_NOTHROW(TransitionKernel::from_dense(2, 1, std::vector<double>{0.5, 0.5 + 1e-13, 0, 1}));
  CHECK_THROWS_AS(RewardTable(1, 1, {1.5}), InputError);
}

TEST_CASE("kernel rows merge duplicates and drop zeros") {
  const TransitionKernel k(3, 1, {{{2, 0.25}, {0, 0.5}, {2, 0.25}, {1, 0.0}}, {{1, 1.0}}, {{2, 1.0}}});
  const auto row = k.row(0, 0);
  REQUIRE(row.size() == 2);
  CHECK(row[0].next == 0);
  CHECK(row[1].next == 2);
  CHECK(row[1].prob == 0.5);
  CHECK(k.prob(0, 0, 1) == 0.0);
}

TEST_CASE("reweighted keeps the pattern") {
  const TransitionKernel k(2, 1, {{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}});
  const auto w = k.reweighted(std::vector<double>{0.0, 1.0, 1.0});
  CHECK(w.row(0, 0).size() == 1);
  CHECK(w.prob(0, 0, 1) == 1.0);
  CHECK_THROWS_AS(k.reweighted(std::vector<double>{0.3, 0.3, 1.0}), InputError);
  CHECK_THROWS_AS(k.reweighted(std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("mdp shape validation") {
  CHECK_THROWS_AS(NonStationaryMdp({}, {}), DimensionError);
  CHECK_THROWS_AS(NonStationaryMdp({TransitionKernel::identity(2, 1)}, {}), DimensionError);
  CHECK_THROWS_AS(NonStationaryMdp({TransitionKernel::identity(2, 1)}, {RewardTable::constant(3, 1, 0)}),
                  DimensionError);
  const auto mdp = one_state(0.5);
  CHECK(mdp.horizon() == 0);
  CHECK_THROWS_AS(mdp.kernel(1), IndexError);
}

TEST_CASE("bellman_apply examples") {
  const auto mdp = one_state(0.5);
  const auto res = bellman_apply(mdp, 0, std::vector<double>{0.0});
  CHECK(res.values == std::vector<double>{0.5});
  CHECK(res.greedy == std::vector<ActionId>{0});

  const auto rnd = oracle::random_mdp(3, 2, 2, 7);
  const std::vector<double> zero(3, 0.0);
  const auto z = bellman_apply(rnd, 1, zero);
  for (StateId s = 0; s < 3; ++s) CHECK(z.values[s] == std::max(rnd.reward(1)(s, 0), rnd.reward(1)(s, 1)));

  CHECK_THROWS_AS(bellman_apply(rnd, 3, zero), IndexError);
  CHECK_THROWS_AS(bellman_apply(rnd, 0, std::vector<double>{0, 0}), DimensionError);
}

TEST_CASE("bellman_apply matches brute-force enumeration") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto mdp = oracle::random_mdp(3, 2, 3, seed);
    const auto v = oracle::random_vector(rng, 3, -2.0, 2.0);
    for (Time t = 0; t <= 3; ++t) {
      const auto res = bellman_apply(mdp, t, v);
      const auto ref = oracle::max_backup(mdp, t, v);
      for (StateId s = 0; s < 3; ++s) {
        CHECK(res.values[s] == doctest::Approx(ref[s]).epsilon(1e-13));
        CHECK(oracle::backup(mdp, t, s, res.greedy[s], v) == doctest::Approx(ref[s]).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("ties go to the lowest action") {
  const auto k = TransitionKernel::identity(2, 3);
  const RewardTable r(2, 3, {0.2, 0.7, 0.7, 0.9, 0.9, 0.9});
  const NonStationaryMdp mdp({k}, {r});
  const auto res = bellman_apply(mdp, 0, std::vector<double>{0, 0});
  CHECK(res.greedy == std::vector<ActionId>{1, 0});
  CHECK(bellman_apply(mdp, 0, std::vector<double>{0, 0}).greedy == res.greedy);
}

TEST_CASE("bellman_apply_policy") {
  const auto mdp = oracle::random_mdp(3, 2, 2, 21);
  const std::vector<double> v{0.3, -1.0, 2.0};
  const auto greedy = bellman_apply(mdp, 1, v);
  CHECK(bellman_apply_policy(mdp, 1, greedy.greedy, v) == greedy.values);

  const std::vector<ActionId> pi{1, 0, 1};
  const auto val = bellman_apply_policy(mdp, 2, pi, v);
  for (StateId s = 0; s < 3; ++s) CHECK(val[s] == doctest::Approx(oracle::backup(mdp, 2, s, pi[s], v)).epsilon(1e-13));

  const auto single = oracle::random_mdp(3, 1, 0, 4);
  CHECK(bellman_apply_policy(single, 0, std::vector<ActionId>{0, 0, 0}, v) == bellman_apply(single, 0, v).values);
  CHECK_THROWS_AS(bellman_apply_policy(mdp, 0, std::vector<ActionId>{0, 0, 2}, v), IndexError);
}

TEST_CASE("bellman_compose") {
  const auto mdp = oracle::random_mdp(3, 2, 4, 5);
  const std::vector<double> v{0.1, 0.2, -0.3};
  CHECK(bellman_compose(mdp, 2, 2, v) == bellman_apply(mdp, 2, v).values);
  const auto twice = oracle::max_backup(mdp, 1, oracle::max_backup(mdp, 2, v));
  const auto composed = bellman_compose(mdp, 1, 2, v);
  for (StateId s = 0; s < 3; ++s) CHECK(composed[s] == doctest::Approx(twice[s]).epsilon(1e-13));
  CHECK_THROWS_AS(bellman_compose(mdp, 3, 2, v), RangeError);
  CHECK_THROWS_AS(bellman_compose(mdp, 0, 5, v), IndexError);
}

TEST_CASE("Bellman operator is monotone and shift-equivariant") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto mdp = oracle::random_mdp(4, 3, 1, 100 + seed);
    const auto u = oracle::random_vector(rng, 4, -3.0, 3.0);
    auto v = u;
    for (auto& x : v) x += unit(rng);
    const auto lu = bellman_apply(mdp, 0, u).values;
    const auto lv = bellman_apply(mdp, 0, v).values;
    for (StateId s = 0; s < 4; ++s) CHECK(lu[s] <= lv[s] + 1e-12);

    const double c = 10.0 * unit(rng) - 5.0;
    auto shifted = u;
    for (auto& x : shifted) x += c;
    const auto ls = bellman_apply(mdp, 0, shifted).values;
    for (StateId s = 0; s < 4; ++s) CHECK(ls[s] == doctest::Approx(lu[s] + c).epsilon(1e-12));
  }
}

TEST_CASE("kernel_under_policy") {
  const auto mdp = oracle::random_mdp(4, 3, 1, 17);
  const std::vector<ActionId> pi{2, 0, 1, 2};
  const auto m = kernel_under_policy(mdp, 1, pi);
  for (StateId s = 0; s < 4; ++s) {
    double sum = 0.0;
    for (StateId j = 0; j < 4; ++j) {
      CHECK(m(s, j) == oracle::p(mdp, 1, s, pi[s], j));
      sum += m(s, j);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }

  const auto single = oracle::random_mdp(3, 1, 0, 2);
  const auto ms = kernel_under_policy(single, 0, std::vector<ActionId>{0, 0, 0});
  const auto dense = single.kernel(0).to_dense();
  CHECK(std::vector<double>(ms.entries().begin(), ms.entries().end()) == dense);

  const TransitionKernel perm(3, 1, {{{1, 1.0}}, {{2, 1.0}}, {{0, 1.0}}});
  const NonStationaryMdp cyc({perm}, {RewardTable::constant(3, 1, 0)});
  const auto mp = kernel_under_policy(cyc, 0, std::vector<ActionId>{0, 0, 0});
  for (StateId i = 0; i < 3; ++i)
    for (StateId j = 0; j < 3; ++j) CHECK(mp(i, j) == (j == (i + 1) % 3 ? 1.0 : 0.0));
}

TEST_CASE("kernel_compose") {
  std::mt19937_64 rng(1);
  auto random_matrix = [&](std::size_t n) {
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) total += e[i * n + j] = std::uniform_real_distribution<double>(0, 1)(rng);
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] /= total;
    }
    return StochasticMatrix(n, e);
  };
  const auto m = random_matrix(4);
  const auto single = kernel_compose(std::vector<StochasticMatrix>{m});
  CHECK(std::equal(single.entries().begin(), single.entries().end(), m.entries().begin()));
  const auto id = kernel_compose(std::vector<StochasticMatrix>{StochasticMatrix::identity(4), m});
  for (std::size_t i = 0; i < 16; ++i) CHECK(id.entries()[i] == doctest::Approx(m.entries()[i]).epsilon(1e-15));

  const auto a = random_matrix(5);
  const auto b = random_matrix(5);
  const auto prod = kernel_compose(std::vector<StochasticMatrix>{a, b});
  const auto ref = oracle::matmul({a.entries().begin(), a.entries().end()}, {b.entries().begin(), b.entries().end()}, 5);
  for (std::size_t i = 0; i < 25; ++i) CHECK(std::abs(prod.entries()[i] - ref[i]) <= 1e-14);
  for (std::size_t i = 0; i < 5; ++i) {
    double sum = 0.0;
    for (double x : prod.row(i)) sum += x;
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }

  CHECK_THROWS_AS(kernel_compose(std::vector<StochasticMatrix>{a, m}), DimensionError);
  CHECK_THROWS_AS(kernel_compose(std::vector<StochasticMatrix>{}), DimensionError);
}

TEST_CASE("kernel_compose is associative") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<StochasticMatrix> ms;
    for (int i = 0; i < 3; ++i) {
      std::vector<double> e(36);
      for (std::size_t r = 0; r < 6; ++r) {
        double total = 0.0;
        for (std::size_t j = 0; j < 6; ++j) total += e[r * 6 + j] = unit(rng);
        for (std::size_t j = 0; j < 6; ++j) e[r * 6 + j] /= total;
      }
      ms.emplace_back(6, e);
    }
    const auto left = kernel_compose(std::vector<StochasticMatrix>{kernel_compose(std::vector{ms[0], ms[1]}), ms[2]});
    const auto right = kernel_compose(std::vector<StochasticMatrix>{ms[0], kernel_compose(std::vector{ms[1], ms[2]})});
    for (std::size_t i = 0; i < 36; ++i) CHECK(std::abs(left.entries()[i] - right.entries()[i]) <= 1e-10);
  }
}

TEST_CASE("total variation and overlap") {
  const std::vector<double> p{0.5, 0.5, 0.0};
  const std::vector<double> q{0.4, 0.5, 0.1};
  CHECK(total_variation(p, q) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(overlap(p, q) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(total_variation(p, p) == 0.0);
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> b{0.0, 1.0};
  CHECK(total_variation(a, b) == 1.0);
  CHECK(overlap(a, b) == 0.0);
  const std::vector<Transition> sp{{0, 0.5}, {1, 0.5}};
  const std::vector<Transition> sq{{0, 0.4}, {1, 0.5}, {2, 0.1}};
  CHECK(total_variation(std::span<const Transition>(sp), std::span<const Transition>(sq)) == doctest::Approx(0.1));
}

TEST_CASE("policy schedule validation") {
  const auto mdp = oracle::random_mdp(2, 2, 1, 3);
  PolicySchedule pi(2, 2, 1);
  CHECK_NOTHROW(pi.validate(mdp));
  pi.set(1, 1, 2);
  CHECK_THROWS_AS(pi.validate(mdp), IndexError);
  CHECK_THROWS_AS(PolicySchedule(3, 2).validate(mdp), DimensionError);
}

}  // TEST_SUITE
