#include "apxsum/approxset.hpp"

#include <algorithm>

namespace apxsum {

namespace {

bool capped_universe(Value t) { return t != kUncapped; }

void require_delta(Value delta) {
  if (delta < 1) throw PreconditionError("delta must be >= 1, got " + std::to_string(delta));
}

}  // namespace

ApxBounds apx_bounds(Value b, std::span<const Value> a, Value t) {
  ApxBounds out;
  auto it = std::upper_bound(a.begin(), a.end(), b);
  if (it != a.begin()) out.lower = *std::prev(it);
  auto jt = std::lower_bound(a.begin(), a.end(), b);
  if (jt != a.end()) out.upper = *jt;
  if (capped_universe(t)) {
    const Value top = t + 1;
    if (top <= b && (!out.lower || *out.lower < top)) out.lower = top;
    if (top >= b && (!out.upper || *out.upper > top)) out.upper = top;
  }
  return out;
}

bool is_approximation(std::span<const Value> a, std::span<const Value> b, Value t, Value delta) {
  // B ⊆ [0,t]
  for (Value x : b) {
    if (x < 0 || (capped_universe(t) && x > t)) return false;
  }
  // A ⊆ B
  std::size_t j = 0;
  for (Value x : a) {
    while (j < b.size() && b[j] < x) ++j;
    if (j == b.size() || b[j] != x) return false;
  }
  // Bracketing, with a moving pointer into A.
  std::size_t i = 0;
  for (Value x : b) {
    while (i < a.size() && a[i] <= x) ++i;
    // a[i-1] is the largest element <= x, a[i] the smallest element > x.
    std::optional<Value> lower;
    std::optional<Value> upper;
    if (i > 0) lower = a[i - 1];
    if (lower && *lower == x) continue;
    if (i < a.size()) upper = a[i];
    if (capped_universe(t) && (!upper || *upper > t + 1)) upper = t + 1;
    if (!lower || !upper) return false;
    if (static_cast<Wide>(*upper) - *lower > delta) return false;
  }
  return true;
}

SparseSet sparsify(std::span<const Value> b, Value t, Value delta) {
  if (delta < 0) throw PreconditionError("negative delta");
  std::vector<Value> kept;
  kept.reserve(std::min<std::size_t>(b.size(), 1 << 16));
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Value x = b[i];
    if (x < 0) throw PreconditionError("sparsify input contains a negative element");
    if (capped_universe(t) && x > t) throw PreconditionError("sparsify input exceeds t");
    if (!kept.empty()) {
      if (x < kept.back()) throw PreconditionError("sparsify input is not sorted");
      if (x == kept.back()) continue;
    }
    kept.push_back(x);
    const std::size_t n = kept.size();
    if (n >= 3 && kept[n - 1] - kept[n - 3] <= delta) kept.erase(kept.end() - 2);
  }
  return SparseSet(std::move(kept), delta, t);
}

SparseSet shift_down(const SparseSet& a, Value t_prime) {
  if (t_prime < 0) throw PreconditionError("negative shift target");
  if (a.capped() && t_prime > a.cap()) throw PreconditionError("shift target exceeds the set's cap");
  auto end = std::upper_bound(a.vec().begin(), a.vec().end(), t_prime);
  return SparseSet(std::vector<Value>(a.vec().begin(), end), a.delta(), t_prime);
}

SparseSet merge_union(const SparseSet& a1, const SparseSet& a2, Value t, Value delta) {
  std::vector<Value> merged;
  merged.reserve(a1.size() + a2.size());
  std::set_union(a1.vec().begin(), a1.vec().end(), a2.vec().begin(), a2.vec().end(), std::back_inserter(merged));
  return sparsify(merged, t, delta);
}

std::size_t unfold_intervals(Value t, Value delta) {
  require_delta(delta);
  if (t < 0) throw PreconditionError("negative t");
  const Value q = t / delta + (t % delta != 0 ? 1 : 0);
  return 4 * static_cast<std::size_t>(std::max<Value>(q, 1));
}

ExtSeq unfold(std::span<const Value> a, Value t, Value delta) {
  const std::size_t n = unfold_intervals(t, delta);
  std::vector<ExtValue> x(2 * n);
  auto place = [&](std::size_t i, Value v) {
    ExtValue& lo = x[2 * i];
    ExtValue& hi = x[2 * i + 1];
    if (!lo || v < *lo) lo = v;
    if (!hi || v > *hi) hi = v;
  };
  for (Value v : a) {
    if (v < 0 || v > t) throw PreconditionError("unfolded element outside [0,t]");
    const Wide twice = 2 * static_cast<Wide>(v);
    const auto i = static_cast<std::size_t>(twice / delta);
    if (i < n) place(i, v);
    if (twice % delta == 0 && i > 0) place(i - 1, v);
  }
  return ExtSeq(std::move(x));
}

SumsetPlan plan_sumset(const SparseSet& a1, const SparseSet& a2, Value t, Value delta) {
  require_delta(delta);
  // Inputs of a capped sumset may come from subproblems with a larger cap;
  // the unfolding simply widens to cover them.
  Value bound = t;
  if (!a1.empty()) bound = std::max(bound, a1.max());
  if (!a2.empty()) bound = std::max(bound, a2.max());
  const ExtSeq x1 = unfold(a1.elems(), bound, delta);
  const ExtSeq x2 = unfold(a2.elems(), bound, delta);
  auto halves = [](const ExtSeq& x) {
    const std::size_t n = x.size() / 2;
    std::vector<ExtValue> even(n);
    std::vector<ExtValue> odd(n);
    for (std::size_t i = 0; i < n; ++i) {
      even[i] = x[2 * i];
      odd[i] = x[2 * i + 1];
    }
    return std::pair{ExtSeq(std::move(even)), ExtSeq(std::move(odd))};
  };
  auto [e1, o1] = halves(x1);
  auto [e2, o2] = halves(x2);
  SumsetPlan plan;
  plan.t = t;
  plan.delta = delta;
  plan.pairs = {ConvInstance{e1, e2}, ConvInstance{e1, o2}, ConvInstance{o1, e2}, ConvInstance{o1, o2}};
  return plan;
}

SparseSet finish_sumset(const SumsetPlan& plan, std::span<const ExtSeq> min_results,
                        std::span<const ExtSeq> max_results) {
  if (min_results.size() != plan.pairs.size() || max_results.size() != plan.pairs.size()) {
    throw PreconditionError("sumset plan expects one min and one max result per pair");
  }
  std::vector<Value> sums;
  for (auto results : {min_results, max_results}) {
    for (const ExtSeq& c : results) {
      for (const ExtValue& e : c.entries()) {
        if (e) sums.push_back(*e);
      }
    }
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return sparsify(sums, kUncapped, plan.delta);
}

SparseSet unbounded_sumset(const SparseSet& a1, const SparseSet& a2, Value t, Value delta,
                           const MinConvEngine& engine) {
  const SumsetPlan plan = plan_sumset(a1, a2, t, delta);
  std::vector<ExtSeq> mins;
  std::vector<ExtSeq> maxs;
  for (const auto& [x, y] : plan.pairs) {
    mins.push_back(engine(x, y));
    maxs.push_back(max_conv(x, y, engine));
  }
  return finish_sumset(plan, mins, maxs);
}

SparseSet cap_result(const SparseSet& unbounded, Value t, Value delta) {
  auto end = std::upper_bound(unbounded.vec().begin(), unbounded.vec().end(), t);
  return sparsify(std::span<const Value>(unbounded.vec().data(), end - unbounded.vec().begin()), t, delta);
}

SparseSet capped_sumset(const SparseSet& a1, const SparseSet& a2, Value t, Value delta,
                        const MinConvEngine& engine) {
  return cap_result(unbounded_sumset(a1, a2, t, delta, engine), t, delta);
}

}  // namespace apxsum
