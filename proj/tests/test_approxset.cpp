#include <gtest/gtest.h>

#include <random>

#include "apxsum/approxset.hpp"
#include "oracles.hpp"

using namespace apxsum;

namespace {

using V = std::vector<Value>;

SparseSet sparse_of(const V& b, Value t, Value delta) { return sparsify(b, t, delta); }

}  // namespace

TEST(ApxBounds, Examples) {
  const V a{0, 5};
  const auto r = apx_bounds(7, a, 10);
  EXPECT_EQ(r.lower, 5);
  EXPECT_EQ(r.upper, 11);
  const auto top = apx_bounds(11, a, 10);
  EXPECT_EQ(top.lower, 11);
  EXPECT_EQ(top.upper, 11);
  const V z{0};
  const auto zero = apx_bounds(0, z, 5);
  EXPECT_EQ(zero.lower, 0);
  EXPECT_EQ(zero.upper, 0);
}

TEST(IsApproximation, Examples) {
  EXPECT_TRUE(is_approximation(V{0, 2, 5}, V{0, 2, 3, 5}, 5, 3));
  EXPECT_TRUE(is_approximation(V{0, 4, 9}, V{0, 4, 9}, 9, 0));
  EXPECT_FALSE(is_approximation(V{0}, V{0, 9}, 10, 3));
  EXPECT_FALSE(is_approximation(V{0, 1}, V{0}, 10, 3));
  EXPECT_FALSE(is_approximation(V{0}, V{0, 11}, 10, 100));
}

TEST(IsApproximation, MatchesDefinition) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const Value t = 1 + static_cast<Value>(rng() % 80);
    const Value delta = static_cast<Value>(rng() % 12);
    const V b = oracle::random_set(rng, rng() % 12, t);
    V a;
    for (Value x : b)
      if (x == 0 || rng() % 2) a.push_back(x);
    ASSERT_EQ(is_approximation(a, b, t, delta), oracle::approximates(a, b, t, delta));
  }
}

TEST(Sparsify, Examples) {
  EXPECT_EQ(sparsify(V{0, 1, 2, 3, 10}, 10, 2).vec(), (V{0, 2, 3, 10}));
  EXPECT_EQ(sparsify(V{0}, 7, 3).vec(), (V{0}));
  EXPECT_EQ(sparsify(V{0, 1, 2}, 10, 5).vec(), (V{0, 2}));
}

TEST(Sparsify, Properties) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 2000; ++trial) {
    const Value t = 1 + static_cast<Value>(rng() % 500);
    const Value delta = static_cast<Value>(rng() % 40);
    const V b = oracle::random_set(rng, rng() % 60, t);
    const SparseSet a = sparsify(b, t, delta);
    ASSERT_TRUE(oracle::delta_sparse(a.vec(), delta));
    ASSERT_TRUE(oracle::approximates(a.vec(), b, t, delta));
    ASSERT_EQ(sparsify(a.vec(), t, delta).vec(), a.vec());
  }
}

TEST(ShiftDown, Examples) {
  EXPECT_EQ(shift_down(SparseSet({0, 4, 9}, 0, kUncapped), 5).vec(), (V{0, 4}));
  EXPECT_EQ(shift_down(SparseSet({0}, 0, kUncapped), 0).vec(), (V{0}));
}

TEST(MergeUnion, Examples) {
  EXPECT_EQ(merge_union(SparseSet({0, 3}, 1, 10), SparseSet({0, 5}, 1, 10), 10, 1).vec(), (V{0, 3, 5}));
  const SparseSet a = sparse_of({0, 2, 5, 6, 9}, 10, 2);
  EXPECT_EQ(merge_union(a, a, 10, 2), a);
  EXPECT_EQ(merge_union(SparseSet({0}, 1, 10), SparseSet({}, 1, 10), 10, 1).vec(), (V{0}));
}

TEST(Unfold, Layout) {
  const V a{0, 3, 4, 9};
  const ExtSeq x = unfold(a, 10, 4);
  ASSERT_EQ(x.size(), unfold_intervals(10, 4) * 2);
  // interval 0 is [0,2], interval 1 is [2,4], interval 2 is [4,6]
  EXPECT_EQ(x[0], 0);
  EXPECT_EQ(x[1], 0);
  EXPECT_EQ(x[2], 3);
  EXPECT_EQ(x[3], 4);
  EXPECT_EQ(x[4], 4);
}

TEST(Sumset, Examples) {
  const SparseSet z({0}, 3, 10);
  EXPECT_EQ(unbounded_sumset(z, z, 10, 3).vec(), (V{0}));
  EXPECT_EQ(capped_sumset(z, z, 10, 3).vec(), (V{0}));

  const SparseSet a1({0, 5}, 12, 12), a2({0, 7}, 12, 12);
  const SparseSet u = unbounded_sumset(a1, a2, 12, 12);
  EXPECT_TRUE(oracle::approximates(u.vec(), {0, 5, 7, 12}, 12, 12));

  const SparseSet b1({0, 5}, 3, 10), b2({0, 7}, 3, 10);
  const SparseSet c = capped_sumset(b1, b2, 10, 3);
  EXPECT_TRUE(oracle::approximates(c.vec(), {0, 5, 7}, 10, 3));
}

TEST(Sumset, CappedAgainstNaive) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const Value t = 1 + static_cast<Value>(rng() % 50);
    const Value delta = 1 + static_cast<Value>(rng() % 6);
    const V b1 = oracle::random_set(rng, rng() % 20, t), b2 = oracle::random_set(rng, rng() % 20, t);
    const SparseSet a1 = sparsify(b1, t, delta), a2 = sparsify(b2, t, delta);
    const V exact = oracle::sumset(a1.vec(), a2.vec(), t);
    const SparseSet c = capped_sumset(a1, a2, t, delta);
    ASSERT_TRUE(oracle::approximates(c.vec(), exact, t, delta)) << "trial " << trial;
    ASSERT_TRUE(oracle::delta_sparse(c.vec(), delta));
  }
}

TEST(Sumset, UnboundedAgainstNaive) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 500; ++trial) {
    const Value k = 1 + static_cast<Value>(rng() % 40);
    V full(static_cast<std::size_t>(k) + 1);
    for (Value i = 0; i <= k; ++i) full[static_cast<std::size_t>(i)] = i;
    const Value t = k, delta = 1 + static_cast<Value>(rng() % 5);
    const SparseSet a = sparsify(full, t, delta);
    const V exact = oracle::sumset(a.vec(), a.vec(), kMaxValue);
    const SparseSet u = unbounded_sumset(a, a, t, delta);
    ASSERT_TRUE(oracle::approximates(u.vec(), exact, exact.back(), delta));
  }
}

TEST(Sumset, EnginesAgree) {
  std::mt19937_64 rng(25);
  const auto ref = make_engine(EngineKind::reference), dense = make_engine(EngineKind::dense);
  for (int trial = 0; trial < 200; ++trial) {
    const Value t = 10 + static_cast<Value>(rng() % 400), delta = 1 + static_cast<Value>(rng() % 20);
    const SparseSet a1 = sparsify(oracle::random_set(rng, 30, t), t, delta);
    const SparseSet a2 = sparsify(oracle::random_set(rng, 30, t), t, delta);
    ASSERT_EQ(capped_sumset(a1, a2, t, delta, ref), capped_sumset(a1, a2, t, delta, dense));
  }
}

// Approximation algebra: each identity is checked on random inputs through the
// independent definition-level checker.
class Algebra : public ::testing::Test {
 protected:
  std::mt19937_64 rng{31};
  Value t = 0, d1 = 0;
  void draw() {
    t = 5 + static_cast<Value>(rng() % 200);
    d1 = static_cast<Value>(rng() % 15);
  }
  V subset_of(const V& b) {
    V a;
    for (Value x : b)
      if (x == 0 || rng() % 3) a.push_back(x);
    return a;
  }
};

TEST_F(Algebra, Transitivity) {
  for (int i = 0; i < 1000; ++i) {
    draw();
    const V c = oracle::random_set(rng, 40, t);
    const V b = sparsify(c, t, d1).vec();
    const V a = sparsify(b, t, d1).vec();
    ASSERT_TRUE(oracle::approximates(a, b, t, d1));
    ASSERT_TRUE(oracle::approximates(b, c, t, d1));
    ASSERT_TRUE(oracle::approximates(a, c, t, d1));
  }
}

TEST_F(Algebra, Sandwich) {
  for (int i = 0; i < 1000; ++i) {
    draw();
    const V c = oracle::random_set(rng, 40, t);
    const V a = sparsify(c, t, d1).vec();
    V b = a;
    for (Value x : c)
      if (rng() % 2) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    ASSERT_TRUE(oracle::approximates(b, c, t, d1));
  }
}

TEST_F(Algebra, Union) {
  for (int i = 0; i < 1000; ++i) {
    draw();
    const V b1 = oracle::random_set(rng, 30, t), b2 = oracle::random_set(rng, 30, t);
    const V a1 = sparsify(b1, t, d1).vec(), a2 = sparsify(b2, t, d1).vec();
    V au, bu;
    std::set_union(a1.begin(), a1.end(), a2.begin(), a2.end(), std::back_inserter(au));
    std::set_union(b1.begin(), b1.end(), b2.begin(), b2.end(), std::back_inserter(bu));
    ASSERT_TRUE(oracle::approximates(au, bu, t, d1));
  }
}

TEST_F(Algebra, SumsetProperty) {
  for (int i = 0; i < 1000; ++i) {
    draw();
    const V b1 = oracle::random_set(rng, 25, t), b2 = oracle::random_set(rng, 25, t);
    const V a1 = sparsify(b1, t, d1).vec(), a2 = sparsify(b2, t, d1).vec();
    ASSERT_TRUE(oracle::approximates(oracle::sumset(a1, a2, t), oracle::sumset(b1, b2, t), t, d1));
  }
}

TEST_F(Algebra, DownShift) {
  for (int i = 0; i < 1000; ++i) {
    draw();
    const V b = oracle::random_set(rng, 40, t);
    const SparseSet a = sparsify(b, t, d1);
    const Value tp = static_cast<Value>(rng() % static_cast<std::uint64_t>(t + 1));
    V bp;
    for (Value x : b)
      if (x <= tp) bp.push_back(x);
    ASSERT_TRUE(oracle::approximates(shift_down(a, tp).vec(), bp, tp, d1));
  }
}
