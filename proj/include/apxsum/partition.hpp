#pragma once

#include <optional>
#include <span>
#include <vector>

#include "apxsum/approxset.hpp"
#include "apxsum/core.hpp"
#include "apxsum/minconv.hpp"

namespace apxsum {

/// Splits X into at most L parts. Items with x·L > 2σ become singletons; the
/// rest are packed in input order, closing a part once its sum reaches 2σ/L.
/// Each non-singleton part sums to less than 4σ/L. Returns item indices.
std::vector<std::vector<std::size_t>> greedy_partition_split(std::span<const Value> items, Value L);

/// Balanced tree of uncapped sparse sumsets over the leaves {0, x}.
struct BottomTree {
  struct Node {
    SparseSet set;
    std::size_t item = 0;  // leaf: item index
    std::size_t left = 0;  // internal: child node ids
    std::size_t right = 0;
    bool leaf = true;
  };
  std::vector<Node> nodes;
  std::size_t root = 0;

  const SparseSet& set() const { return nodes[root].set; }
};

/// Sparse (∞,Δ)-approximation of all subset sums of one part.
BottomTree bottom_half_tree(std::span<const Value> items, std::span<const std::size_t> part, Value delta,
                            const MinConvEngine& engine = default_engine());

SparseSet bottom_half(std::span<const Value> part_items, Value delta, const MinConvEngine& engine = default_engine());

/// Exact A + B through an indicator-vector convolution (NTT) or, for small
/// inputs, pair enumeration.
std::vector<Value> exact_sumset(std::span<const Value> a, std::span<const Value> b);

/// Balanced tree of exact sumsets. Level 0 holds the inputs.
struct SumsetTree {
  std::vector<std::vector<std::vector<Value>>> levels;
  const std::vector<Value>& result() const { return levels.back().front(); }
};

/// Largest total of the input maxima accepted by exact_sumset_tree.
inline constexpr Value kExactSumsetLimit = Value{1} << 25;

SumsetTree exact_sumset_tree_levels(std::vector<std::vector<Value>> sets);
std::vector<Value> exact_sumset_tree(std::vector<std::vector<Value>> sets);

/// Sorted distinct values of ⌊z/R⌋.
std::vector<Value> weak_round(std::span<const Value> z, Value r);

struct PartitionTrace {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<BottomTree> bottoms;      // one per part
  std::vector<std::size_t> top_inputs;  // part index of each top-tree leaf
  SumsetTree top;                       // over rounded sets
  Value r = 1;
};

struct PartitionRun {
  ApproxResult result;
  Value sigma = 0;
  Value half = 0;  // ⌊σ/2⌋
  Value L = 1;
  Value r = 1;
  Value delta = 0;
  /// Largest element of R·(top result) that is ≤ ⌊σ/2⌋.
  Value chosen = 0;
  /// True when the largest item exceeds σ/2 and the answer is X minus it.
  bool big_item = false;
  PartitionTrace trace;
};

/// ⌈ε^{-1/2}⌉, computed exactly.
Value default_partition_L(const Rational& eps);

/// Δ = max(1, ⌊εσ/8⌋).
Value partition_delta(const Rational& eps, Value sigma);

/// L is clamped into [1, max(1,σ)].
PartitionRun solve_partition(const PartitionInstance& inst, const Rational& eps, std::optional<Value> L = std::nullopt,
                             const MinConvEngine& engine = default_engine());

ApproxResult approximate_partition(const PartitionInstance& inst, const Rational& eps,
                                   std::optional<Value> L = std::nullopt);

/// Item indices Y with R·Σ⌊z_i/R⌋ = s, where s/R is in the top result.
std::vector<std::size_t> reconstruct_partition(const PartitionTrace& trace, std::span<const Value> items, Value s);

}  // namespace apxsum
