#include <gtest/gtest.h>

#include <random>

#include "apxsum/partition.hpp"
#include "apxsum/testkit.hpp"
#include "oracles.hpp"

using namespace apxsum;

namespace {

using V = std::vector<Value>;
using Parts = std::vector<std::vector<std::size_t>>;

Value partition_opt(const V& items) { return oracle::opt(items, sum_of(items) / 2); }

}  // namespace

TEST(Split, Examples) {
  EXPECT_EQ(greedy_partition_split(V{10, 10, 10, 10}, 4), (Parts{{0, 1}, {2, 3}}));
  // 100·2 = 200 does not exceed 2σ = 204, so nothing becomes a singleton
  EXPECT_EQ(greedy_partition_split(V{100, 1, 1}, 2), (Parts{{0, 1, 2}}));
  EXPECT_EQ(greedy_partition_split(V{100, 1, 1}, 3), (Parts{{0}, {1, 2}}));
  EXPECT_EQ(greedy_partition_split(V{5, 6, 7}, 1), (Parts{{0, 1, 2}}));
}

TEST(Split, Properties) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 500; ++trial) {
    V items(1 + rng() % 30);
    for (auto& x : items) x = 1 + static_cast<Value>(rng() % 1000);
    const Value L = 1 + static_cast<Value>(rng() % 12);
    const Value sigma = sum_of(items);
    const Parts parts = greedy_partition_split(items, L);
    ASSERT_LE(parts.size(), static_cast<std::size_t>(L));
    std::vector<std::size_t> all;
    for (const auto& p : parts) {
      all.insert(all.end(), p.begin(), p.end());
      if (p.size() > 1) ASSERT_LT(oracle::sum(items, p) * L, 4 * sigma);
    }
    ASSERT_EQ(all.size(), items.size());
    ASSERT_TRUE(oracle::distinct_indices(all, items.size()));
  }
}

TEST(BottomHalf, Examples) {
  EXPECT_EQ(bottom_half(V{7}, 3).vec(), (V{0, 7}));
  EXPECT_EQ(bottom_half(V{3, 4}, 1).vec(), (V{0, 3, 4, 7}));
}

TEST(BottomHalf, Approximates) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 300; ++trial) {
    V items(1 + rng() % 12);
    for (auto& x : items) x = 1 + static_cast<Value>(rng() % 500);
    const Value sigma = sum_of(items);
    const Value delta = 1 + static_cast<Value>(rng() % static_cast<std::uint64_t>(std::max<Value>(1, sigma / 4)));
    const SparseSet z = bottom_half(items, delta);
    const V exact = oracle::subset_sums(items, sigma);
    ASSERT_TRUE(oracle::approximates(z.vec(), exact, sigma, delta));
  }
}

TEST(ExactSumset, Examples) {
  EXPECT_EQ(exact_sumset(V{0, 1}, V{0, 2}), (V{0, 1, 2, 3}));
  EXPECT_EQ(exact_sumset_tree({{0, 4, 9}}), (V{0, 4, 9}));
}

TEST(ExactSumset, TreeAgainstNaive) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<V> sets;
    for (int i = 0; i < 4; ++i) sets.push_back(oracle::random_set(rng, rng() % 20, 64));
    V want = sets[0];
    for (int i = 1; i < 4; ++i) want = oracle::sumset(want, sets[static_cast<std::size_t>(i)], kMaxValue);
    ASSERT_EQ(exact_sumset_tree(sets), want);
  }
}

TEST(ExactSumset, LargeInputsUseTransform) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 5; ++trial) {
    const V a = oracle::random_set(rng, 3000, 200000), b = oracle::random_set(rng, 3000, 200000);
    ASSERT_EQ(exact_sumset(a, b), oracle::sumset(a, b, kMaxValue));
  }
}

TEST(WeakRound, Examples) {
  EXPECT_EQ(weak_round(V{0, 5, 9}, 4), (V{0, 1, 2}));
  EXPECT_EQ(weak_round(V{0, 5, 9}, 1), (V{0, 5, 9}));
}

TEST(Params, DefaultL) {
  EXPECT_EQ(default_partition_L({1, 4}), 2);
  EXPECT_EQ(default_partition_L({1, 64}), 8);
  EXPECT_EQ(default_partition_L({1, 10}), 4);
  EXPECT_EQ(partition_delta({1, 4}, 100), 3);
  EXPECT_EQ(partition_delta({1, 64}, 100), 1);
}

TEST(Solve, Examples) {
  EXPECT_EQ(approximate_partition(PartitionInstance::from_items({1, 1}), {1, 2}).value, 1);
  const auto r = approximate_partition(PartitionInstance::from_items({3, 1, 1, 2, 2, 1}), {1, 4});
  EXPECT_EQ(r.value, 5);
  EXPECT_EQ(sum_of(r.witness_items), 5);
}

TEST(Solve, BigItem) {
  const auto run = solve_partition(PartitionInstance::from_items({100, 1, 1}), {1, 4});
  EXPECT_TRUE(run.big_item);
  EXPECT_EQ(run.result.value, 2);
  EXPECT_EQ(run.result.mode, SolveMode::exact_fallback);
}

TEST(Solve, RandomGuarantee) {
  const Rational eps_list[] = {{1, 4}, {1, 16}, {1, 64}};
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto inst = gen_partition(1 + seed % 16, 10000, seed, static_cast<Shape>(seed % 3));
    const Rational eps = eps_list[seed % 3];
    const auto run = solve_partition(inst, eps);
    const Value opt = partition_opt(inst.items);
    const auto report = verify_partition_guarantee(inst, run.result, eps, opt);
    ASSERT_TRUE(report.pass()) << "seed " << seed << ": " << report.to_string();
    if (!run.big_item) ASSERT_GE(run.chosen, opt - 2 * run.delta) << "seed " << seed;
  }
}

TEST(Solve, ExplicitL) {
  const auto inst = gen_partition(14, 5000, 3);
  const Value opt = partition_opt(inst.items);
  for (Value L = 1; L <= 8; ++L) {
    const auto run = solve_partition(inst, {1, 16}, L);
    EXPECT_EQ(run.L, L);
    EXPECT_TRUE(verify_partition_guarantee(inst, run.result, {1, 16}, opt).pass()) << "L=" << L;
  }
}

TEST(Reconstruct, TopValues) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = gen_partition(12, 3000, seed);
    const auto run = solve_partition(inst, {1, 16});
    if (run.big_item) continue;
    EXPECT_TRUE(reconstruct_partition(run.trace, inst.items, 0).empty());
    for (Value s : run.trace.top.result()) {
      const auto idx = reconstruct_partition(run.trace, inst.items, s * run.r);
      Value rounded = 0;
      for (std::size_t p = 0; p < run.trace.parts.size(); ++p) {
        Value part_sum = 0;
        for (std::size_t i : idx)
          if (std::find(run.trace.parts[p].begin(), run.trace.parts[p].end(), i) != run.trace.parts[p].end())
            part_sum += inst.items[i];
        rounded += part_sum / run.r;
      }
      ASSERT_EQ(rounded, s);
    }
  }
}

TEST(Reconstruct, SinglePartUnrounded) {
  const auto inst = PartitionInstance::from_items({4, 6, 9});
  const auto run = solve_partition(inst, {1, 64}, 1);
  ASSERT_EQ(run.r, 1);
  for (Value s : run.trace.top.result()) EXPECT_EQ(oracle::sum(inst.items, reconstruct_partition(run.trace, inst.items, s)), s);
}
