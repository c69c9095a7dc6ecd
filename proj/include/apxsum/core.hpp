#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "apxsum/types.hpp"

namespace apxsum {

/// Multiset of positive items and a target t. Duplicate items are allowed.
struct SubsetSumInstance {
  std::vector<Value> items;
  Value target = 1;

  std::size_t size() const { return items.size(); }
  void validate() const;
};

/// Items and their total σ; the implied target is ⌊σ/2⌋.
struct PartitionInstance {
  std::vector<Value> items;
  Value sigma = 0;

  static PartitionInstance from_items(std::vector<Value> items);
  std::size_t size() const { return items.size(); }
  void validate() const;
};

/// Distinguishes input instances from the padded intermediate of the
/// Knapsack-to-GapSubsetSum reduction, which carries weight-0 items and
/// negative values.
enum class KnapsackDomain { input, intermediate };

struct KnapsackInstance {
  std::vector<Value> weights;
  std::vector<Value> values;
  Value budget = 1;  // W
  Value goal = 1;    // V
  Value max_abs = 1; // M

  std::size_t size() const { return weights.size(); }

  /// Recomputes M as the largest absolute input number.
  void refresh_max_abs();
  void validate(KnapsackDomain domain = KnapsackDomain::input) const;
};

enum class InstanceKind { subsetsum, partition, knapsack };

using Instance = std::variant<SubsetSumInstance, PartitionInstance, KnapsackInstance>;

InstanceKind parse_instance_kind(std::string_view name);

/// Parses the text instance format:
///   subsetsum: "<n> <t>" then n items
///   partition: "<n>" then n items
///   knapsack:  "<n> <W> <V>" then n lines "w v"
/// '#' starts a comment. Errors carry the offending line number.
Instance parse_instance(std::string_view text, InstanceKind kind);
Instance load_instance(const std::string& path, InstanceKind kind);

SubsetSumInstance load_subsetsum(const std::string& path);
PartitionInstance load_partition(const std::string& path);
KnapsackInstance load_knapsack(const std::string& path);

std::string to_text(const SubsetSumInstance& inst);
std::string to_text(const PartitionInstance& inst);
std::string to_text(const KnapsackInstance& inst);
std::string to_text(const Instance& inst);

/// Strictly increasing set of non-negative integers that is Δ-sparse: no
/// window [x, x+Δ] holds more than two elements. Elements never exceed the
/// cap unless the cap is kUncapped.
class SparseSet {
 public:
  SparseSet() = default;
  SparseSet(std::vector<Value> elems, Value delta, Value cap);

  /// The set {0}.
  static SparseSet zero(Value delta, Value cap) { return SparseSet({0}, delta, cap); }

  std::span<const Value> elems() const { return elems_; }
  const std::vector<Value>& vec() const { return elems_; }
  Value delta() const { return delta_; }
  Value cap() const { return cap_; }
  bool capped() const { return cap_ != kUncapped; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  Value max() const { return elems_.back(); }
  bool contains(Value v) const;

  bool operator==(const SparseSet&) const = default;

 private:
  std::vector<Value> elems_;
  Value delta_ = 0;
  Value cap_ = kUncapped;
};

/// True if no three elements a1 < a2 < a3 satisfy a3 <= a1 + Δ.
bool is_delta_sparse(std::span<const Value> sorted, Value delta);

enum class SolveMode { exact_fallback, approx };

std::string to_string(SolveMode mode);

struct ApproxResult {
  Value value = 0;
  std::vector<std::size_t> witness;  // indices into the instance's items
  std::vector<Value> witness_items;
  Rational epsilon;
  Value delta = 0;
  SolveMode mode = SolveMode::approx;
  /// Contract the value is claimed to satisfy, e.g. "value >= min(OPT,(1-eps)t)".
  std::string guarantee;
};

/// JSON object {value, witness, epsilon, delta, mode, elapsed_ms}.
std::string to_json(const ApproxResult& result, double elapsed_ms);

/// Exact S(X;t) by subset enumeration. Oracle use only: |X| <= 30.
std::vector<Value> subset_sums_bruteforce(std::span<const Value> items, Value t);

inline constexpr std::size_t kBruteForceLimit = 30;

Value sum_of(std::span<const Value> items);

}  // namespace apxsum
