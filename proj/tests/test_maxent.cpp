#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "fedrank/errors.hpp"
#include "fedrank/maxent.hpp"
#include "support/oracles.hpp"

using namespace fedrank;
using testing::oracle_best_completion;
using testing::oracle_entropy_bits;
using testing::oracle_max_entropy;

TEST_CASE("closed-form allocation examples") {
  auto a = closed_form_allocation(3, 5);
  CHECK(a.counts == std::vector<int>{1, 2, 2});
  CHECK(a.entropy == doctest::Approx(1.522).epsilon(1e-3));

  a = closed_form_allocation(3, 6);
  CHECK(a.counts == std::vector<int>{2, 2, 2});
  CHECK(a.entropy == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

  a = closed_form_allocation(4, 5);
  CHECK(a.counts == std::vector<int>{1, 1, 1, 2});
  CHECK(a.entropy == doctest::Approx(oracle_max_entropy(4, 5)).epsilon(1e-12));
  CHECK(a.entropy == doctest::Approx(1.922).epsilon(1e-3));

  CHECK_THROWS_AS(closed_form_allocation(0, 3), InvalidInput);
  CHECK_THROWS_AS(closed_form_allocation(3, 0), InvalidInput);
}

TEST_CASE("ideal cumulative entropy") {
  const double per_prefix[] = {0, 1, std::log2(3.0), 2, oracle_max_entropy(4, 5), oracle_max_entropy(4, 6),
                               oracle_max_entropy(4, 7), 2};
  CHECK(ideal_cumulative_entropy(4, 8) ==
        doctest::Approx(std::accumulate(std::begin(per_prefix), std::end(per_prefix), 0.0)).epsilon(1e-12));
  CHECK(ideal_cumulative_entropy(4, 8) == doctest::Approx(12.3754).epsilon(1e-5));
  CHECK(ideal_cumulative_entropy(1, 17) == 0.0);
  CHECK(ideal_cumulative_entropy(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("ideal cumulative entropy is monotone in n and K") {
  for (int K = 1; K <= 8; ++K) {
    for (int n = 1; n <= 30; ++n) {
      if (n > 1) CHECK(ideal_cumulative_entropy(K, n) >= ideal_cumulative_entropy(K, n - 1));
      if (K > 1) CHECK(ideal_cumulative_entropy(K, n) >= ideal_cumulative_entropy(K - 1, n) - 1e-12);
    }
  }
}

TEST_CASE("relaxation optimum examples") {
  auto r = relaxation_optimum({}, 3);
  CHECK(r.probabilities == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(r.entropy == doctest::Approx(1.585).epsilon(1e-3));

  const std::vector<double> three_fifths = {0.6};
  r = relaxation_optimum(three_fifths, 3);
  CHECK(r.probabilities[1] == doctest::Approx(0.2));
  CHECK(r.probabilities[2] == doctest::Approx(0.2));
  CHECK(r.entropy == doctest::Approx(1.371).epsilon(1e-3));

  const std::vector<double> two_fifths = {0.4};
  r = relaxation_optimum(two_fifths, 3);
  CHECK(r.probabilities[1] == doctest::Approx(0.3));
  CHECK(r.entropy == doctest::Approx(1.571).epsilon(1e-3));

  const std::vector<double> too_much = {0.7, 0.5};
  CHECK_THROWS_AS(relaxation_optimum(too_much, 3), InvalidInput);
  const std::vector<double> all_fixed = {0.5, 0.5};
  CHECK_THROWS_AS(relaxation_optimum(all_fixed, 2), InvalidInput);
}

TEST_CASE("relaxation bounds every integral completion") {
  for (int K = 2; K <= 4; ++K) {
    for (int n = 1; n <= 10; ++n) {
      // Every prefix of fixed counts with at least one coordinate left free.
      std::vector<int> fixed;
      std::function<void()> walk = [&] {
        const int used = std::accumulate(fixed.begin(), fixed.end(), 0);
        std::vector<double> probs;
        for (int c : fixed) probs.push_back(static_cast<double>(c) / n);
        const double bound = relaxation_optimum(probs, K).entropy;
        const double best = oracle_best_completion(fixed, K, n);
        CHECK(bound >= best - 1e-12);
        if (static_cast<int>(fixed.size()) + 1 >= K) return;
        for (int c = 0; c <= n - used; ++c) {
          fixed.push_back(c);
          walk();
          fixed.pop_back();
        }
      };
      walk();
    }
  }
}

TEST_CASE("closed form beats every other composition") {
  for (int K = 1; K <= 5; ++K) {
    for (int n = 1; n <= 15; ++n) {
      CHECK(closed_form_allocation(K, n).entropy == doctest::Approx(oracle_max_entropy(K, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("entropy of an allocation ignores the order of counts") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> counts(2 + trial % 4);
    std::uniform_int_distribution<int> c(0, 7);
    for (auto& x : counts) x = c(rng);
    counts[0] += 1;
    const double h = oracle_entropy_bits(counts);
    std::shuffle(counts.begin(), counts.end(), rng);
    CHECK(oracle_entropy_bits(counts) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("branch and bound reproduces the three-type, five-position walk-through") {
  const auto result = branch_and_bound_maxent(3, 5, true);
  CHECK(result.best.entropy == doctest::Approx(1.522).epsilon(1e-3));
  auto sorted = result.best.counts;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2, 2});

  auto find = [&](std::vector<int> fixed) -> const BnBNode& {
    auto it = std::find_if(result.trace.begin(), result.trace.end(),
                           [&](const BnBNode& n) { return n.fixed == fixed; });
    REQUIRE(it != result.trace.end());
    return *it;
  };
  const auto& root = find({});
  CHECK(root.relaxation_value == doctest::Approx(1.585).epsilon(1e-3));
  CHECK(root.outcome == NodeOutcome::Branched);

  CHECK(find({0}).relaxation_value == doctest::Approx(1.0));
  CHECK(find({0}).outcome == NodeOutcome::Branched);
  CHECK(find({0, 0}).outcome == NodeOutcome::ClosedFeasible);
  CHECK(find({0, 1}).incumbent_after == doctest::Approx(0.722).epsilon(1e-3));
  CHECK(find({0, 2}).incumbent_after == doctest::Approx(0.971).epsilon(1e-3));
  for (int c : {3, 4, 5}) CHECK(find({0, c}).outcome == NodeOutcome::PrunedDuplicate);

  CHECK(find({1}).outcome == NodeOutcome::ClosedFeasible);
  CHECK(find({1}).incumbent_after == doctest::Approx(1.522).epsilon(1e-3));

  CHECK(find({2}).relaxation_value == doctest::Approx(1.571).epsilon(1e-3));
  CHECK(find({2}).outcome == NodeOutcome::Branched);
  for (int c : {0, 1, 2, 3}) CHECK(find({2, c}).outcome == NodeOutcome::PrunedDuplicate);

  const auto& p3 = find({3});
  CHECK(p3.outcome == NodeOutcome::PrunedBound);
  CHECK(p3.relaxation_value == doctest::Approx(1.371).epsilon(1e-3));
  CHECK(p3.incumbent_before == doctest::Approx(1.522).epsilon(1e-3));

  CHECK(find({4}).outcome == NodeOutcome::PrunedBound);
  CHECK(find({4}).relaxation_value == doctest::Approx(0.922).epsilon(1e-3));
}

TEST_CASE("branch and bound small cases") {
  auto r = branch_and_bound_maxent(2, 2);
  CHECK(r.best.counts == std::vector<int>{1, 1});
  CHECK(r.best.entropy == doctest::Approx(1.0));
  r = branch_and_bound_maxent(4, 7);
  CHECK(r.best.entropy == doctest::Approx(oracle_max_entropy(4, 7)).epsilon(1e-12));
  CHECK(std::accumulate(r.best.counts.begin(), r.best.counts.end(), 0) == 7);
  r = branch_and_bound_maxent(1, 5);
  CHECK(r.best.counts == std::vector<int>{5});
  CHECK(r.best.entropy == 0.0);
}

TEST_CASE("verification over a grid") {
  const auto report = verify_closed_form(6, 20);
  CHECK(report.passed());
  CHECK(report.instances == 120);
  CHECK(report.totals.pruned_duplicate > 0);
  CHECK(report.totals.pruned_bound > 0);
  CHECK(report.totals.closed_feasible > 0);

  const auto single = verify_closed_form(1, 5);
  CHECK(single.passed());
  for (int n = 1; n <= 5; ++n) CHECK(exhaustive_maxent(1, n).entropy == 0.0);
}

TEST_CASE("exhaustive search agrees with the ordered-composition oracle") {
  for (int K = 1; K <= 5; ++K) {
    for (int n = 1; n <= 12; ++n) {
      CHECK(exhaustive_maxent(K, n).entropy == doctest::Approx(oracle_max_entropy(K, n)).epsilon(1e-12));
    }
  }
}
