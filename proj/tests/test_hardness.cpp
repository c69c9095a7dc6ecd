#include <gtest/gtest.h>

#include <random>

#include "apxsum/hardness.hpp"
#include "apxsum/testkit.hpp"
#include "oracles.hpp"

using namespace apxsum;

namespace {

KnapsackInstance knap(std::vector<Value> w, std::vector<Value> v, Value W, Value V) {
  KnapsackInstance k;
  k.weights = std::move(w);
  k.values = std::move(v);
  k.budget = W;
  k.goal = V;
  k.refresh_max_abs();
  return k;
}

// Best value within the budget, by enumerating all subsets.
Value knapsack_brute(const KnapsackInstance& k) {
  Value best = 0;
  const std::size_t n = k.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Value w = 0, v = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        w += k.weights[i];
        v += k.values[i];
      }
    if (w <= k.budget) best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST(Bellman, Examples) {
  const auto a = bellman_knapsack(knap({2, 3}, {3, 4}, 4, 5));
  EXPECT_EQ(a.optimum, 4);
  EXPECT_FALSE(a.decision);
  EXPECT_EQ(bellman_knapsack(knap({}, {}, 3, 1)).optimum, 0);
  EXPECT_TRUE(bellman_knapsack(knap({1}, {1}, 1, 1)).decision);
}

TEST(Bellman, AgainstEnumeration) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto k = gen_knapsack(1 + seed % 12, 40, 0.5, seed);
    const auto a = bellman_knapsack(k);
    ASSERT_EQ(a.optimum, knapsack_brute(k)) << "seed " << seed;
    Value w = 0, v = 0;
    for (std::size_t i : a.chosen) {
      w += k.weights[i];
      v += k.values[i];
    }
    ASSERT_LE(w, k.budget);
    ASSERT_EQ(v, a.optimum);
  }
}

TEST(Preprocess, KeepsBestPerWeight) {
  const auto k = knap({3, 3, 3, 3, 3}, {1, 5, 2, 4, 3}, 6, 9);
  const auto p = knapsack_preprocess(k);
  EXPECT_EQ(p.weights, (std::vector<Value>{3, 3}));
  EXPECT_EQ(p.values, (std::vector<Value>{5, 4}));
  EXPECT_EQ(bellman_knapsack(p).optimum, bellman_knapsack(k).optimum);
  const auto distinct = knap({1, 2, 3}, {4, 5, 6}, 6, 2);
  EXPECT_EQ(knapsack_preprocess(distinct).weights, distinct.weights);
}

TEST(Preprocess, OptimumUnchanged) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<Value> w(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1 + static_cast<Value>(rng() % 8);
      v[i] = 1 + static_cast<Value>(rng() % 30);
    }
    const auto k = knap(w, v, 1 + static_cast<Value>(rng() % 30), 1 + static_cast<Value>(rng() % 30));
    ASSERT_EQ(bellman_knapsack(knapsack_preprocess(k)).optimum, bellman_knapsack(k).optimum);
  }
}

TEST(Padding, Shape) {
  const auto p = pad_knapsack(knap({2}, {3}, 5, 6));
  // W = 5 adds weights 1,2,4; V = 6 adds values -1,-2,-4
  EXPECT_EQ(p.weights, (std::vector<Value>{2, 1, 2, 4, 0, 0, 0}));
  EXPECT_EQ(p.values, (std::vector<Value>{3, 0, 0, 0, -1, -2, -4}));
}

TEST(Reduction, SolvableHitsTarget) {
  const auto gap = knapsack_to_gap_instance(knap({2}, {3}, 2, 3));
  const auto ss = gap.to_subsetsum();
  EXPECT_EQ(oracle::opt(ss.items, ss.target), ss.target);
}

TEST(Reduction, UnsolvableBelowGap) {
  const auto gap = knapsack_to_gap_instance(knap({2}, {1}, 2, 5));
  const auto ss = gap.to_subsetsum();
  const Value opt = oracle::opt(ss.items, ss.target);
  EXPECT_LT(static_cast<Wide>(opt) * gap.eps.den, static_cast<Wide>(gap.eps.den - gap.eps.num) * ss.target);
}

TEST(Reduction, RandomBothDirections) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto k = gen_knapsack(1 + seed % 6, 12, 0.5, seed);
    const auto gap = knapsack_to_gap_instance(k);
    if (gap.items.size() > 18) continue;
    const auto ss = gap.to_subsetsum();
    const Value opt = oracle::opt(ss.items, ss.target);
    if (bellman_knapsack(k).decision) {
      ASSERT_EQ(opt, ss.target) << "seed " << seed;
    } else {
      ASSERT_LT(static_cast<Wide>(opt) * gap.eps.den, static_cast<Wide>(gap.eps.den - gap.eps.num) * ss.target)
          << "seed " << seed;
    }
  }
}

TEST(GapSolver, Examples) {
  EXPECT_TRUE(gap_subset_sum({{5, 5}, 10}, {1, 10}));
  EXPECT_FALSE(gap_subset_sum({{3}, 10}, {1, 2}));
}

TEST(ViaGap, SmallNUsesBellman) {
  const auto k = knap({1, 2}, {3, 4}, 3, 7);
  const auto a = solve_knapsack_via_gap(k);
  EXPECT_TRUE(a.used_bellman);
  EXPECT_EQ(a.decision, bellman_knapsack(k).decision);
}

TEST(ViaGap, SolvableThroughGapPath) {
  const auto k = knap({1, 1, 1, 1}, {1, 1, 1, 1}, 2, 2);
  const auto a = solve_knapsack_via_gap(k);
  EXPECT_FALSE(a.used_bellman);
  EXPECT_TRUE(a.decision);
}

TEST(ViaGap, AgreesWithBellman) {
  FailureTally tally;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto k = gen_knapsack(1 + seed % 10, 50, 0.5, seed);
    SchemeConfig cfg;
    cfg.seed = seed;
    tally.record(seed, solve_knapsack_via_gap(k, cfg).decision == bellman_knapsack(k).decision);
  }
  EXPECT_LE(tally.failure_rate(), 0.01) << tally.seeds_string();
}

TEST(Bellman, BudgetGuard) {
  EXPECT_THROW(bellman_knapsack(knap({1}, {1}, kKnapsackBudgetLimit + 1, 1)), BudgetError);
}
