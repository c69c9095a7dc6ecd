#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "apxsum/core.hpp"

namespace apxsum {

/// Exact (A + B) ∩ [0, cap]. Guarded to |A|·|B| ≤ 10^7.
std::vector<Value> naive_sumset(std::span<const Value> a, std::span<const Value> b, Value cap = kUncapped);

inline constexpr std::size_t kNaiveSumsetLimit = 10'000'000;

/// Item distributions:
///   uniform   – items uniform in [1, max_item]
///   clustered – items just below and above t/k for k ∈ {8, 16, 32}, which
///               straddles the large/small boundary of the splitting step
///   two-scale – a few items near σ/2 mixed with many small ones
enum class Shape { uniform, clustered, two_scale };

Shape parse_shape(std::string_view name);
std::string to_string(Shape shape);

struct GenSpec {
  InstanceKind kind = InstanceKind::subsetsum;
  std::size_t n = 10;
  Value max_item = 100;
  /// Subset sum: target as a fraction of Σ(X). Knapsack: budget as a fraction
  /// of Σ(w). Clamped into (0, 1].
  double density = 0.5;
  std::uint64_t seed = 1;
  Shape shape = Shape::uniform;
};

Instance gen_instance(const GenSpec& spec);
SubsetSumInstance gen_subsetsum(std::size_t n, Value max_item, double density, std::uint64_t seed,
                                Shape shape = Shape::uniform);
PartitionInstance gen_partition(std::size_t n, Value max_item, std::uint64_t seed, Shape shape = Shape::uniform);
KnapsackInstance gen_knapsack(std::size_t n, Value max_abs, double density, std::uint64_t seed);

/// max S(X;t) by enumeration (n ≤ 30).
Value bruteforce_opt(const SubsetSumInstance& inst);

struct ClauseCheck {
  std::string name;
  bool pass = false;
  /// Slack of the inequality in exact rational form: lhs·den − rhs·den.
  Wide margin_num = 0;
  Value margin_den = 1;

  double margin() const { return static_cast<double>(margin_num) / static_cast<double>(margin_den); }
};

struct GuaranteeReport {
  std::vector<ClauseCheck> clauses;
  bool pass() const;
  /// First failing clause name, or "" on success.
  std::string failing() const;
  std::string to_string() const;
};

/// Subset-sum contract: witness sums to value, value ≤ t, value ≤ OPT and
/// value ≥ min(OPT, (1−ε)t).
GuaranteeReport verify_guarantee(const SubsetSumInstance& inst, const ApproxResult& result, const Rational& eps,
                                 Value oracle_opt);

/// Partition contract against OPT = max{Σ(Y) ≤ ⌊σ/2⌋}: witness sums to value
/// and (1−ε)·OPT ≤ value ≤ OPT.
GuaranteeReport verify_partition_guarantee(const PartitionInstance& inst, const ApproxResult& result,
                                           const Rational& eps, Value oracle_opt);

/// Empirical failure accounting for randomized suites.
struct FailureTally {
  std::size_t trials = 0;
  std::vector<std::uint64_t> failing_seeds;

  void record(std::uint64_t seed, bool ok) {
    ++trials;
    if (!ok) failing_seeds.push_back(seed);
  }
  std::size_t failures() const { return failing_seeds.size(); }
  double failure_rate() const { return trials == 0 ? 0.0 : static_cast<double>(failures()) / trials; }
  std::string seeds_string(std::size_t limit = 20) const;
};

}  // namespace apxsum
