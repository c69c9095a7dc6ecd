#pragma once

#include <vector>

#include "apxsum/core.hpp"
#include "apxsum/subsetsum.hpp"

namespace apxsum {

struct KnapsackAnswer {
  Value optimum = 0;  // best total value with total weight ≤ W
  bool decision = false;  // optimum ≥ V
  std::vector<std::size_t> chosen;
};

/// Largest budget accepted by the weight-indexed DP.
inline constexpr Value kKnapsackBudgetLimit = Value{1} << 26;

/// 0/1 DP over weights 0..W. Accepts the padded intermediate instance
/// (weight 0, negative values).
KnapsackAnswer bellman_knapsack(const KnapsackInstance& inst);

/// Keeps the ⌊W/w⌋ most valuable items of each weight w and drops items
/// heavier than W. The optimum is unchanged.
KnapsackInstance knapsack_preprocess(const KnapsackInstance& inst);

/// Adds (weight 2^i, value 0) for 2^i ≤ W and (weight 0, value −2^i) for
/// 2^i ≤ V. M is kept from the input.
KnapsackInstance pad_knapsack(const KnapsackInstance& inst);

struct GapInstance {
  KnapsackInstance padded;
  Wide m_prime = 0;  // 4·n·M, n counting padding items
  std::vector<Wide> items;
  Wide target = 0;
  Rational eps;  // 1/(2W)

  /// Narrows to 63 bits; throws OverflowError when that is impossible.
  SubsetSumInstance to_subsetsum() const;
};

/// Caps every value at V, pads, then sets x_i = w_i·M' − v_i, t = W·M' − V. OPT = t iff the Knapsack instance is a
/// YES instance; otherwise OPT < (1−ε)t.
GapInstance knapsack_to_gap_instance(const KnapsackInstance& inst);

/// YES iff the scheme reaches (1−ε)t. Only meaningful under the promise
/// OPT = t or OPT < (1−ε)t.
bool gap_subset_sum(const SubsetSumInstance& inst, const Rational& eps, const SchemeConfig& config = {});

struct ViaGapAnswer {
  bool decision = false;
  bool used_bellman = false;  // taken when 2^n ≤ M
};

ViaGapAnswer solve_knapsack_via_gap(const KnapsackInstance& inst, const SchemeConfig& config = {});

}  // namespace apxsum
