#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "apxsum/approxset.hpp"
#include "apxsum/core.hpp"
#include "apxsum/minconv.hpp"

namespace apxsum {

/// User-facing knobs of the randomized scheme.
struct SchemeConfig {
  Value confidence = 4;  // C
  std::uint64_t seed = 0;
  /// Replaces the color-coding parameter k. At small t the formula makes k so
  /// large that every item is "large"; tests use this to exercise splitting.
  std::optional<Value> k_override;
  EngineKind engine = EngineKind::sparse;
  /// Solve all same-level sumsets with one packed convolution per batch.
  bool batch_levels = false;
};

/// Parameters frozen at the top-level call.
struct SchemeParams {
  Value confidence = 4;
  Value k = 8;
  Value rounds = 1;
  int log_ratio = 1;  // ⌈log₂(t/Δ)⌉
  Rational eta;       // 1/(2·log_ratio)
  std::uint64_t seed = 0;

  /// k = max(8, C·⌈log₂(nt/Δ)⌉³), rounds = max(1, C·⌈log₂(nt/Δ)⌉).
  static SchemeParams freeze(const SchemeConfig& config, std::size_t n, Value t, Value delta);
};

/// t' = ⌈t/2 + t/(4·log_ratio)⌉ + Δ, the target handed to both halves.
Value split_target(Value t, Value delta, int log_ratio);

/// A batch of capped sumsets (A1 ⊕_t A2 approximations).
struct SumsetJob {
  const SparseSet* a1;
  const SparseSet* a2;
  Value t;
  Value delta;
};

class SumsetExecutor {
 public:
  explicit SumsetExecutor(MinConvEngine engine = default_engine(), bool batched = false)
      : engine_(std::move(engine)), batched_(batched) {}

  std::vector<SparseSet> capped(std::span<const SumsetJob> jobs) const;

  bool batched() const { return batched_; }
  const MinConvEngine& engine() const { return engine_; }

  /// Number of engine calls issued so far.
  std::size_t calls() const { return calls_; }

 private:
  MinConvEngine engine_;
  bool batched_;
  mutable std::size_t calls_ = 0;
};

enum class NodeKind { greedy, colorcoding, split };

const char* to_string(NodeKind kind);

/// One non-empty color class folded into the running set.
struct ColorStep {
  std::vector<std::size_t> part;  // item indices
  SparseSet z;                    // sparsify(part ∪ {0})
  SparseSet after;
};

inline constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

struct TraceNode {
  NodeKind kind = NodeKind::greedy;
  Value t = 0;
  int depth = 0;
  std::uint64_t key = 0;
  std::vector<std::size_t> items;  // indices into SolveTrace::items
  SparseSet result;

  std::vector<Value> prefix;                   // greedy: prefix sums kept (≤ t)
  std::vector<std::vector<ColorStep>> rounds;  // colorcoding: steps per round
  std::size_t large = kNoNode;                 // split: color-coding node for X_L
  std::size_t left = kNoNode;
  std::size_t right = kNoNode;
  SparseSet small;  // split: A_S
};

struct SolveTrace {
  std::vector<Value> items;
  Value delta = 1;
  std::vector<TraceNode> nodes;  // nodes[0] is the root
  int max_depth = 0;

  const TraceNode& root() const { return nodes.front(); }
};

struct ColorCodingOutput {
  SparseSet set;
  TraceNode node;
};

/// Color coding over items with k·x ≥ t and x ≤ t. Output ⊆ S(X;t); it
/// (t,Δ)-approximates S(X;t) with high probability.
ColorCodingOutput color_coding(std::span<const Value> items, Value t, Value delta, const SchemeParams& params,
                               const SumsetExecutor& executor = SumsetExecutor());

/// Prefix sums in input order while ≤ t, sparsified. Requires max(X) ≤ Δ.
SparseSet greedy_small(std::span<const Value> items, Value t, Value delta);

/// The recursive scheme. Items above t are ignored.
SolveTrace recursive_splitting(std::span<const Value> items, Value t, Value delta, const SchemeParams& params,
                               const SumsetExecutor& executor = SumsetExecutor());

/// Indices (ascending) of items summing to v, where v is in the root set.
std::vector<std::size_t> reconstruct(const SolveTrace& trace, Value v);

/// Exact 0/1 reachability table up to t with first-reacher item per sum.
struct ExactTable {
  Value t = 0;
  std::vector<std::int32_t> reached_by;  // -1 unreachable; sum 0 uses -2

  bool reachable(Value s) const { return s >= 0 && s <= t && reached_by[static_cast<std::size_t>(s)] != -1; }
  std::vector<Value> sums() const;
  std::vector<std::size_t> witness(std::span<const Value> items, Value s) const;
};

inline constexpr Value kExactTargetLimit = Value{1} << 26;

ExactTable exact_subset_sums(std::span<const Value> items, Value t);

struct SubsetSumRun {
  ApproxResult result;
  SchemeParams params;
  std::optional<SolveTrace> trace;  // absent in exact-fallback mode
  std::optional<ExactTable> exact;  // present in exact-fallback mode
  std::size_t engine_calls = 0;

  /// The final set the value was taken from.
  std::vector<Value> root_set() const;
  std::vector<std::size_t> witness_for(std::span<const Value> items, Value v) const;
};

/// Δ = ⌊min{εt, t/8}⌋; exact DP when Δ < 1.
Value subset_sum_delta(const Rational& eps, Value t);

SubsetSumRun solve_subset_sum(const SubsetSumInstance& inst, const Rational& eps, const SchemeConfig& config = {});

ApproxResult approximate_subset_sum(const SubsetSumInstance& inst, const Rational& eps,
                                    const SchemeConfig& config = {});

}  // namespace apxsum
