#include "apxsum/hardness.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace apxsum {

KnapsackAnswer bellman_knapsack(const KnapsackInstance& inst) {
  inst.validate(KnapsackDomain::intermediate);
  const Value W = inst.budget;
  if (W > kKnapsackBudgetLimit) {
    throw BudgetError("budget W=" + std::to_string(W) + " exceeds the DP limit of " +
                      std::to_string(kKnapsackBudgetLimit));
  }
  const auto width = static_cast<std::size_t>(W) + 1;
  std::vector<Value> best(width, 0);
  // take[i] marks the capacities at which item i improved the table.
  std::vector<std::vector<bool>> take(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Value w = inst.weights[i];
    const Value v = inst.values[i];
    take[i].assign(width, false);
    if (v <= 0 || w > W) continue;  // never improves the optimum
    for (Value c = W; c >= w; --c) {
      const auto cell = static_cast<std::size_t>(c);
      const Value cand = checked_add(best[cell - static_cast<std::size_t>(w)], v);
      if (cand > best[cell]) {
        best[cell] = cand;
        take[i][cell] = true;
      }
    }
  }
  KnapsackAnswer answer;
  answer.optimum = best[static_cast<std::size_t>(W)];
  answer.decision = answer.optimum >= inst.goal;
  Value c = W;
  for (std::size_t i = inst.size(); i-- > 0;) {
    if (take[i][static_cast<std::size_t>(c)]) {
      answer.chosen.push_back(i);
      c -= inst.weights[i];
    }
  }
  std::reverse(answer.chosen.begin(), answer.chosen.end());
  return answer;
}

KnapsackInstance knapsack_preprocess(const KnapsackInstance& inst) {
  inst.validate(KnapsackDomain::input);
  std::map<Value, std::vector<std::size_t>> by_weight;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (inst.weights[i] <= inst.budget) by_weight[inst.weights[i]].push_back(i);
  }
  std::vector<std::size_t> keep;
  for (auto& [w, ids] : by_weight) {
    std::stable_sort(ids.begin(), ids.end(),
                     [&](std::size_t a, std::size_t b) { return inst.values[a] > inst.values[b]; });
    const auto limit = static_cast<std::size_t>(inst.budget / w);
    if (ids.size() > limit) ids.resize(limit);
    keep.insert(keep.end(), ids.begin(), ids.end());
  }
  std::sort(keep.begin(), keep.end());
  KnapsackInstance out;
  out.budget = inst.budget;
  out.goal = inst.goal;
  out.max_abs = inst.max_abs;
  for (std::size_t i : keep) {
    out.weights.push_back(inst.weights[i]);
    out.values.push_back(inst.values[i]);
  }
  return out;
}

KnapsackInstance pad_knapsack(const KnapsackInstance& inst) {
  inst.validate(KnapsackDomain::input);
  KnapsackInstance out = inst;
  for (int i = 0; i <= floor_log2(inst.budget); ++i) {
    out.weights.push_back(Value{1} << i);
    out.values.push_back(0);
  }
  for (int i = 0; i <= floor_log2(inst.goal); ++i) {
    out.weights.push_back(0);
    out.values.push_back(-(Value{1} << i));
  }
  out.validate(KnapsackDomain::intermediate);
  return out;
}

SubsetSumInstance GapInstance::to_subsetsum() const {
  SubsetSumInstance inst;
  inst.target = narrow(target);
  for (Wide x : items) inst.items.push_back(narrow(x));
  inst.validate();
  return inst;
}

GapInstance knapsack_to_gap_instance(const KnapsackInstance& inst) {
  GapInstance gap;
  // Values above V are cut to V. Any solution then has a sub-solution whose
  // value exceeds V by less than V, which the padding can remove.
  KnapsackInstance capped = inst;
  for (Value& v : capped.values) v = std::min(v, inst.goal);
  gap.padded = pad_knapsack(capped);
  const Wide n = static_cast<Wide>(gap.padded.size());
  gap.m_prime = 4 * n * inst.max_abs;
  const Wide limit = static_cast<Wide>(1) << 126;
  gap.target = static_cast<Wide>(inst.budget) * gap.m_prime - inst.goal;
  if (gap.target > limit) throw OverflowError("reduction target " + to_string(gap.target) + " exceeds 2^126");
  for (std::size_t i = 0; i < gap.padded.size(); ++i) {
    const Wide x = static_cast<Wide>(gap.padded.weights[i]) * gap.m_prime - gap.padded.values[i];
    if (x <= 0) throw std::logic_error("reduction produced a non-positive item");
    gap.items.push_back(x);
  }
  gap.eps = Rational{1, checked_mul(2, inst.budget)};
  return gap;
}

bool gap_subset_sum(const SubsetSumInstance& inst, const Rational& eps, const SchemeConfig& config) {
  const ApproxResult r = approximate_subset_sum(inst, eps, config);
  // value ≥ (1−ε)t  ⇔  value·den ≥ (den−num)·t
  return static_cast<Wide>(r.value) * eps.den >= static_cast<Wide>(eps.den - eps.num) * inst.target;
}

ViaGapAnswer solve_knapsack_via_gap(const KnapsackInstance& inst, const SchemeConfig& config) {
  inst.validate(KnapsackDomain::input);
  ViaGapAnswer answer;
  // n ≤ log₂ M: Bellman is already fast enough.
  if (inst.size() < 63 && (Value{1} << inst.size()) <= inst.max_abs) {
    answer.used_bellman = true;
    answer.decision = bellman_knapsack(inst).decision;
    return answer;
  }
  const GapInstance gap = knapsack_to_gap_instance(inst);
  answer.decision = gap_subset_sum(gap.to_subsetsum(), gap.eps, config);
  return answer;
}

}  // namespace apxsum
