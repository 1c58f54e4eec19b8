#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "fedrank/diversity.hpp"
#include "fedrank/errors.hpp"
#include "fedrank/maxent.hpp"
#include "support/oracles.hpp"

using namespace fedrank;

namespace {

double ce(std::string_view letters) { return cumulative_entropy(encode_types(letters)); }
double nce8(std::string_view letters, int K) { return nce_at_k(encode_types(letters), K, 8).value; }

/// All sequences of length n over `alphabet` symbols.
void for_each_sequence(int n, int alphabet, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> seq(n, 0);
  while (true) {
    fn(seq);
    int i = n - 1;
    while (i >= 0 && ++seq[i] == alphabet) seq[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

TEST_CASE("entropy examples") {
  CHECK(entropy(TypeCounts::from_counts({3, 1})) == doctest::Approx(0.811).epsilon(1e-3));
  CHECK(entropy(TypeCounts::from_counts({4})) == 0.0);
  CHECK(entropy(TypeCounts::from_counts({1, 2, 2})) == doctest::Approx(1.522).epsilon(1e-3));
  CHECK(entropy(TypeCounts::from_counts({1, 2, 2})) ==
        doctest::Approx(testing::oracle_entropy_bits({1, 2, 2})).epsilon(1e-12));
  CHECK_THROWS_AS(entropy(TypeCounts::from_counts({0, 0})), InvalidInput);
  CHECK_THROWS_AS(TypeCounts::from_counts({-1, 2}), InvalidInput);
}

TEST_CASE("cumulative entropy examples") {
  CHECK(ce("AABB") == doctest::Approx(1.918).epsilon(1e-3));
  CHECK(ce("ABAB") == doctest::Approx(2.918).epsilon(1e-3));
  CHECK(ce("AAAA") == 0.0);
  CHECK_THROWS_AS(cumulative_entropy(std::vector<int>{}), InvalidInput);
}

TEST_CASE("cumulative entropy separates local diversity that entropy misses") {
  const auto aabb = encode_types("AABB");
  const auto abab = encode_types("ABAB");
  CHECK(prefix_entropies(aabb).back() == prefix_entropies(abab).back());
  CHECK(cumulative_entropy(abab) > cumulative_entropy(aabb));
}

TEST_CASE("nce examples") {
  CHECK(nce8("ABCDABCD", 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nce8("AABBBCCC", 4) == doctest::Approx(7.4663 / 12.3754).epsilon(1e-4));
  CHECK(ce("AABBBCCC") == doctest::Approx(7.4663).epsilon(1e-4));
  CHECK(nce8("AAAAAAAA", 4) == 0.0);
  CHECK(nce8("AAAAAAAA", 1) == 1.0);
  CHECK_THROWS_AS(nce_at_k(encode_types("AB"), 0, 2), InvalidInput);
  CHECK_THROWS_AS(nce_at_k(encode_types("ABC"), 2, 3), InvalidInput);
  // Only the top k count toward the universe check and the value.
  CHECK(nce_at_k(encode_types("ABC"), 2, 2).value == 1.0);
}

TEST_CASE("nce ordering of the three eight-item lists") {
  const double list1 = nce8("AABBBCCC", 4);
  const double list2 = nce8("ABCDABCD", 4);
  const double list3 = nce8("AABBCCDD", 4);
  CHECK(list2 > list3);
  CHECK(list3 > list1);
  CHECK(list3 == doctest::Approx(0.7253).epsilon(1e-4));
}

TEST_CASE("round-robin lists attain the closed-form optimum at every prefix") {
  const auto types = encode_types("ABCDABCD");
  const auto prefixes = prefix_entropies(types);
  for (int p = 1; p <= 8; ++p) {
    CHECK(prefixes[p - 1] == doctest::Approx(closed_form_allocation(4, p).entropy).epsilon(1e-12));
  }
}

TEST_CASE("diversity profile") {
  auto p = diversity_profile(encode_types("AABB"), 2);
  REQUIRE(p.prefix_entropies.size() == 4);
  CHECK(p.prefix_entropies[0] == 0.0);
  CHECK(p.prefix_entropies[1] == 0.0);
  CHECK(p.prefix_entropies[2] == doctest::Approx(0.918).epsilon(1e-3));
  CHECK(p.prefix_entropies[3] == doctest::Approx(1.0));
  CHECK(p.cumulative == doctest::Approx(1.918).epsilon(1e-3));

  p = diversity_profile(encode_types("ABAB"), 2);
  CHECK(p.prefix_entropies[1] == doctest::Approx(1.0));
  CHECK(p.prefix_entropies[2] == doctest::Approx(0.918).epsilon(1e-3));

  p = diversity_profile(encode_types("ABCD"), 4);
  CHECK(p.prefix_entropies[2] == doctest::Approx(std::log2(3.0)));
  CHECK(p.prefix_entropies[3] == doctest::Approx(2.0));
  CHECK(p.nce == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.cumulative == doctest::Approx(std::accumulate(p.prefix_entropies.begin(), p.prefix_entropies.end(), 0.0)));
}

TEST_CASE("incremental prefix entropies equal naive recomputation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> type(0, 1 + trial % 6);
    std::vector<int> list(1 + trial % 40);
    for (auto& t : list) t = type(rng);
    const auto fast = prefix_entropies(list);
    const auto slow = testing::oracle_prefix_entropies(list);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-12);
  }
}

TEST_CASE("entropy bounded by log2 of active types, equal only for equal counts") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> count(0, 6);
    std::vector<int> counts(1 + trial % 5);
    for (auto& c : counts) c = count(rng);
    if (std::accumulate(counts.begin(), counts.end(), 0) == 0) counts[0] = 1;
    const double h = entropy(TypeCounts::from_counts(counts));
    const auto active = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; });
    CHECK(h >= 0.0);
    CHECK(h <= std::log2(static_cast<double>(active)) + 1e-12);
    std::vector<int> nz;
    for (int c : counts) if (c > 0) nz.push_back(c);
    const bool equal = std::all_of(nz.begin(), nz.end(), [&](int c) { return c == nz[0]; });
    CHECK((std::abs(h - std::log2(static_cast<double>(active))) < 1e-12) == equal);
  }
}

TEST_CASE("NCE stays within [0, 1] for K <= 5 and n <= 12") {
  std::mt19937_64 rng(13);
  for (int K = 1; K <= 5; ++K) {
    std::uniform_int_distribution<int> type(0, K - 1);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<int> list(1 + trial % 12);
      for (auto& t : list) t = type(rng);
      for (int k = 1; k <= 12; ++k) {
        const double v = nce_at_k(list, K, k).value;
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("round-robin ordering maximises CE of a type multiset") {
  // For every sequence of length <= 8 over <= 3 types, the best ordering of
  // its multiset (found by brute force) has CE equal to the round-robin
  // arrangement built greedily from the most plentiful remaining types.
  for (int n = 1; n <= 8; ++n) {
    std::map<std::vector<int>, double> best_by_multiset;
    for_each_sequence(n, 3, [&](const std::vector<int>& seq) {
      std::vector<int> counts(3, 0);
      for (int t : seq) ++counts[t];
      double& best = best_by_multiset[counts];
      best = std::max(best, cumulative_entropy(seq));
    });
    for (const auto& [counts, best] : best_by_multiset) {
      std::vector<int> remaining = counts;
      std::vector<int> used(3, 0);
      std::vector<int> robin;
      for (int p = 0; p < n; ++p) {
        // Pick the type that keeps the prefix most even: fewest used so far,
        // ties to the one with most remaining.
        int pick = -1;
        for (int t = 0; t < 3; ++t) {
          if (remaining[t] == 0) continue;
          if (pick < 0 || used[t] < used[pick] || (used[t] == used[pick] && remaining[t] > remaining[pick])) pick = t;
        }
        robin.push_back(pick);
        --remaining[pick];
        ++used[pick];
      }
      CHECK(cumulative_entropy(robin) >= best - 1e-12);
      for_each_sequence(n, 3, [&](const std::vector<int>& seq) {
        std::vector<int> c(3, 0);
        for (int t : seq) ++c[t];
        if (c == counts) CHECK(cumulative_entropy(robin) >= cumulative_entropy(seq) - 1e-12);
      });
    }
  }
}
