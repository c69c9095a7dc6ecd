#include <gtest/gtest.h>

#include <random>

#include "apxsum/subsetsum.hpp"
#include "apxsum/testkit.hpp"
#include "oracles.hpp"

using namespace apxsum;

namespace {

using V = std::vector<Value>;

SchemeParams params_for(std::size_t n, Value t, Value delta, std::uint64_t seed, Value k = 32) {
  SchemeConfig cfg;
  cfg.seed = seed;
  cfg.k_override = k;
  return SchemeParams::freeze(cfg, n, t, delta);
}

bool subset_of(const V& a, const V& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

TEST(Params, Freeze) {
  SchemeConfig cfg;
  const auto p = SchemeParams::freeze(cfg, 10, 1000, 10);
  // log2(10 * 1000 / 10) rounds up to 10
  EXPECT_EQ(p.rounds, 40);
  EXPECT_EQ(p.k, 4000);
  EXPECT_EQ(p.log_ratio, 7);
  cfg.k_override = 4;
  EXPECT_THROW(SchemeParams::freeze(cfg, 10, 1000, 10), ValidationError);
}

TEST(Params, SplitTarget) {
  // t/2 + t/(4·lg) + Δ with lg = 4
  EXPECT_EQ(split_target(1600, 10, 4), 800 + 100 + 10);
  EXPECT_EQ(split_target(7, 1, 1), 6 + 1);
}

TEST(Delta, Formula) {
  EXPECT_EQ(subset_sum_delta({1, 4}, 100), 12);
  EXPECT_EQ(subset_sum_delta({1, 64}, 1000), 15);
  EXPECT_EQ(subset_sum_delta({1, 64}, 10), 0);
}

TEST(Greedy, Examples) {
  EXPECT_EQ(greedy_small(V{2, 3, 5}, 7, 5), sparsify(V{0, 2, 5}, 7, 5));
  EXPECT_EQ(greedy_small(V{}, 9, 2).vec(), (V{0}));
  EXPECT_EQ(greedy_small(V{1, 1, 1}, 2, 1).vec(), (V{0, 1, 2}));
  EXPECT_THROW(greedy_small(V{4}, 9, 2), PreconditionError);
}

TEST(Greedy, Approximates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const Value delta = 1 + static_cast<Value>(rng() % 10);
    const Value t = 1 + static_cast<Value>(rng() % 200);
    V items(rng() % 14);
    for (auto& x : items) x = 1 + static_cast<Value>(rng() % static_cast<std::uint64_t>(delta));
    const SparseSet out = greedy_small(items, t, delta);
    ASSERT_TRUE(oracle::approximates(out.vec(), oracle::subset_sums(items, t), t, delta));
  }
}

TEST(ColorCoding, Empty) {
  const auto out = color_coding(V{}, 10, 1, params_for(0, 10, 1, 1));
  EXPECT_EQ(out.set.vec(), (V{0}));
}

TEST(ColorCoding, SmallExact) {
  const V items{6, 7};
  const auto out = color_coding(items, 13, 1, params_for(2, 13, 1, 3, 8));
  EXPECT_TRUE(oracle::approximates(out.set.vec(), oracle::subset_sums(items, 13), 13, 1));
}

TEST(ColorCoding, RejectsSmallItems) {
  EXPECT_THROW(color_coding(V{1}, 100, 5, params_for(1, 100, 5, 1, 8)), PreconditionError);
}

TEST(ColorCoding, RandomLargeItems) {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    V items(10);
    for (auto& x : items) x = 125 + static_cast<Value>(rng() % 876);
    const auto out = color_coding(items, 1000, 50, params_for(items.size(), 1000, 50, seed, 8));
    const V exact = oracle::subset_sums(items, 1000);
    ASSERT_TRUE(subset_of(out.set.vec(), exact));
    if (!oracle::approximates(out.set.vec(), exact, 1000, 50)) ++failures;
  }
  EXPECT_LE(failures, 2);
}

TEST(Recursive, SmallItemsIsGreedy) {
  const V items{1, 2, 2, 1, 3};
  const auto trace = recursive_splitting(items, 20, 3, params_for(5, 20, 3, 1));
  EXPECT_EQ(trace.root().kind, NodeKind::greedy);
  EXPECT_EQ(trace.root().result, greedy_small(items, 20, 3));
}

TEST(Recursive, SingleItemAtTarget) {
  const V items{800};
  const auto trace = recursive_splitting(items, 800, 100, params_for(1, 800, 100, 2));
  EXPECT_TRUE(trace.root().result.contains(0));
  EXPECT_TRUE(oracle::approximates(trace.root().result.vec(), {0, 800}, 800, 100));
}

TEST(Recursive, GridInstance) {
  const V items{100, 200, 300, 400};
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto trace = recursive_splitting(items, 1000, 100, params_for(4, 1000, 100, seed));
    const V out = trace.root().result.vec();
    const V exact = oracle::subset_sums(items, 1000);
    ASSERT_TRUE(subset_of(out, exact));
    if (!oracle::approximates(out, exact, 1000, 100)) ++failures;
  }
  EXPECT_LE(failures, 2);
}

TEST(Recursive, DepthAndSoundness) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = gen_subsetsum(12, 2000, 0.4, seed, seed % 2 ? Shape::clustered : Shape::uniform);
    const Value delta = std::max<Value>(1, inst.target / 32);
    const auto params = params_for(inst.size(), inst.target, delta, seed);
    const auto trace = recursive_splitting(inst.items, inst.target, delta, params);
    EXPECT_LE(trace.max_depth, params.log_ratio);
    const V exact = oracle::subset_sums(inst.items, inst.target);
    ASSERT_TRUE(subset_of(trace.root().result.vec(), exact)) << "seed " << seed;
    for (Value v : trace.root().result.vec()) {
      const auto idx = reconstruct(trace, v);
      ASSERT_TRUE(oracle::distinct_indices(idx, inst.size()));
      ASSERT_EQ(oracle::sum(inst.items, idx), v) << "seed " << seed;
    }
  }
}

TEST(Recursive, BatchedMatchesUnbatched) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = gen_subsetsum(14, 5000, 0.5, seed);
    const Value delta = std::max<Value>(1, inst.target / 64);
    const auto params = params_for(inst.size(), inst.target, delta, seed);
    const SumsetExecutor plain(default_engine(), false), batched(default_engine(), true);
    const auto a = recursive_splitting(inst.items, inst.target, delta, params, plain);
    const auto b = recursive_splitting(inst.items, inst.target, delta, params, batched);
    ASSERT_EQ(a.root().result, b.root().result) << "seed " << seed;
    EXPECT_LE(batched.calls(), plain.calls());
  }
}

TEST(Exact, Table) {
  const V items{2, 3, 5};
  const auto table = exact_subset_sums(items, 10);
  EXPECT_EQ(table.sums(), oracle::subset_sums(items, 10));
  for (Value s : table.sums()) EXPECT_EQ(oracle::sum(items, table.witness(items, s)), s);
  EXPECT_FALSE(table.reachable(1));
  EXPECT_THROW(exact_subset_sums(items, kExactTargetLimit + 1), BudgetError);
}

TEST(Solve, Examples) {
  const SubsetSumInstance a{{2, 3, 5}, 10};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SchemeConfig cfg;
    cfg.seed = seed;
    const auto r = approximate_subset_sum(a, {1, 2}, cfg);
    EXPECT_EQ(r.value, 10);
    EXPECT_EQ(sum_of(r.witness_items), 10);
  }
  const SubsetSumInstance b{{6}, 5};
  EXPECT_EQ(approximate_subset_sum(b, {1, 10}).value, 0);
}

TEST(Solve, ExactFallback) {
  const SubsetSumInstance inst{{3, 7, 11}, 20};
  const auto run = solve_subset_sum(inst, {1, 64});
  EXPECT_EQ(run.result.mode, SolveMode::exact_fallback);
  EXPECT_EQ(run.result.value, 18);
  EXPECT_TRUE(run.exact.has_value());
}

TEST(Solve, RandomGuarantee) {
  const Rational eps_list[] = {{1, 4}, {1, 8}, {1, 16}};
  FailureTally tally;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = gen_subsetsum(1 + seed % 14, 2000, 0.5, seed, static_cast<Shape>(seed % 3));
    const Rational eps = eps_list[seed % 3];
    SchemeConfig cfg;
    cfg.seed = seed;
    const auto r = approximate_subset_sum(inst, eps, cfg);
    const auto report = verify_guarantee(inst, r, eps, oracle::opt(inst.items, inst.target));
    ASSERT_TRUE(report.clauses[0].pass && report.clauses[1].pass && report.clauses[2].pass) << report.to_string();
    tally.record(seed, report.pass());
  }
  EXPECT_LE(tally.failure_rate(), 0.01) << tally.seeds_string();
}

TEST(Solve, ReconstructEveryRootValue) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = gen_subsetsum(12, 1500, 0.5, seed);
    SchemeConfig cfg;
    cfg.seed = seed;
    const auto run = solve_subset_sum(inst, {1, 16}, cfg);
    for (Value v : run.root_set()) ASSERT_EQ(oracle::sum(inst.items, run.witness_for(inst.items, v)), v);
  }
}

TEST(Solve, Deterministic) {
  const auto inst = gen_subsetsum(14, 100000, 0.3, 9);
  SchemeConfig cfg;
  cfg.seed = 77;
  const auto a = approximate_subset_sum(inst, {1, 32}, cfg);
  const auto b = approximate_subset_sum(inst, {1, 32}, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.witness, b.witness);
}
