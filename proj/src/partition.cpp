#include "apxsum/partition.hpp"

#include <algorithm>
#include <cstdint>

namespace apxsum {

std::vector<std::vector<std::size_t>> greedy_partition_split(std::span<const Value> items, Value L) {
  if (L < 1) throw PreconditionError("L must be >= 1");
  const Value sigma = sum_of(items);
  const Wide twice_sigma = 2 * static_cast<Wide>(sigma);
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> current;
  Value current_sum = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (static_cast<Wide>(items[i]) * L > twice_sigma) parts.push_back({i});
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (static_cast<Wide>(items[i]) * L > twice_sigma) continue;
    current.push_back(i);
    current_sum += items[i];
    if (static_cast<Wide>(current_sum) * L >= twice_sigma) {
      parts.push_back(std::move(current));
      current.clear();
      current_sum = 0;
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

BottomTree bottom_half_tree(std::span<const Value> items, std::span<const std::size_t> part, Value delta,
                            const MinConvEngine& engine) {
  if (delta < 1) throw PreconditionError("delta must be >= 1");
  BottomTree tree;
  std::vector<std::size_t> layer;
  for (std::size_t idx : part) {
    BottomTree::Node leaf;
    leaf.item = idx;
    leaf.set = SparseSet({0, items[idx]}, delta, kUncapped);
    layer.push_back(tree.nodes.size());
    tree.nodes.push_back(std::move(leaf));
  }
  if (layer.empty()) {
    tree.nodes.push_back({SparseSet::zero(delta, kUncapped), 0, 0, 0, false});
    tree.root = 0;
    return tree;
  }
  while (layer.size() > 1) {
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
      const SparseSet& a = tree.nodes[layer[i]].set;
      const SparseSet& b = tree.nodes[layer[i + 1]].set;
      BottomTree::Node node;
      node.leaf = false;
      node.left = layer[i];
      node.right = layer[i + 1];
      node.set = unbounded_sumset(a, b, std::max(a.max(), b.max()), delta, engine);
      next.push_back(tree.nodes.size());
      tree.nodes.push_back(std::move(node));
    }
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer.swap(next);
  }
  tree.root = layer.front();
  return tree;
}

SparseSet bottom_half(std::span<const Value> part_items, Value delta, const MinConvEngine& engine) {
  std::vector<std::size_t> part(part_items.size());
  for (std::size_t i = 0; i < part.size(); ++i) part[i] = i;
  return bottom_half_tree(part_items, part, delta, engine).set();
}

namespace {

constexpr std::uint32_t kMod = 2013265921;  // 15·2^27 + 1
constexpr std::uint32_t kRoot = 31;
constexpr int kMaxLog = 27;

std::uint32_t power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  base %= kMod;
  while (exp > 0) {
    if (exp & 1) result = result * base % kMod;
    base = base * base % kMod;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

void ntt(std::vector<std::uint32_t>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint32_t w = power(kRoot, (kMod - 1) / len);
    if (inverse) w = power(w, kMod - 2);
    std::vector<std::uint32_t> twiddle(len / 2);
    twiddle[0] = 1;
    for (std::size_t i = 1; i < len / 2; ++i) twiddle[i] = static_cast<std::uint32_t>(std::uint64_t{twiddle[i - 1]} * w % kMod);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::uint32_t u = a[i + j];
        const std::uint32_t v = static_cast<std::uint32_t>(std::uint64_t{a[i + j + len / 2]} * twiddle[j] % kMod);
        a[i + j] = u + v >= kMod ? u + v - kMod : u + v;
        a[i + j + len / 2] = u >= v ? u - v : u + kMod - v;
      }
    }
  }
  if (inverse) {
    const std::uint64_t inv_n = power(n, kMod - 2);
    for (auto& x : a) x = static_cast<std::uint32_t>(x * inv_n % kMod);
  }
}

void require_sorted_nonnegative(std::span<const Value> s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || (i > 0 && s[i] <= s[i - 1])) {
      throw PreconditionError("exact sumset inputs must be strictly increasing and non-negative");
    }
  }
}

}  // namespace

std::vector<Value> exact_sumset(std::span<const Value> a, std::span<const Value> b) {
  require_sorted_nonnegative(a);
  require_sorted_nonnegative(b);
  if (a.empty() || b.empty()) return {};
  const Value top = checked_add(a.back(), b.back());
  if (top > kExactSumsetLimit) {
    throw BudgetError("exact sumset up to " + std::to_string(top) + " exceeds the limit of " +
                      std::to_string(kExactSumsetLimit));
  }
  const auto span = static_cast<std::size_t>(top) + 1;
  if (a.size() * b.size() <= 16 * span) {
    std::vector<Value> out;
    out.reserve(a.size() * b.size());
    for (Value x : a) {
      for (Value y : b) out.push_back(x + y);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::size_t n = 1;
  while (n < span) n <<= 1;
  if (n > (std::size_t{1} << kMaxLog)) throw BudgetError("transform length exceeds 2^27");
  std::vector<std::uint32_t> fa(n, 0);
  std::vector<std::uint32_t> fb(n, 0);
  for (Value x : a) fa[static_cast<std::size_t>(x)] = 1;
  for (Value y : b) fb[static_cast<std::size_t>(y)] = 1;
  ntt(fa, false);
  ntt(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] = static_cast<std::uint32_t>(std::uint64_t{fa[i]} * fb[i] % kMod);
  ntt(fa, true);
  // Counts are at most min(|A|,|B|) < kMod, so non-zero means reachable.
  std::vector<Value> out;
  for (std::size_t i = 0; i < span; ++i) {
    if (fa[i] != 0) out.push_back(static_cast<Value>(i));
  }
  return out;
}

SumsetTree exact_sumset_tree_levels(std::vector<std::vector<Value>> sets) {
  Wide total = 0;
  for (const auto& s : sets) {
    require_sorted_nonnegative(s);
    if (s.empty()) throw PreconditionError("exact sumset tree inputs must be non-empty");
    total += s.back();
  }
  if (total > kExactSumsetLimit) {
    throw BudgetError("exact sumset tree over a total of " + to_string(total) + " exceeds the limit of " +
                      std::to_string(kExactSumsetLimit));
  }
  SumsetTree tree;
  if (sets.empty()) sets.push_back({0});
  tree.levels.push_back(std::move(sets));
  while (tree.levels.back().size() > 1) {
    const auto& layer = tree.levels.back();
    std::vector<std::vector<Value>> next;
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(exact_sumset(layer[i], layer[i + 1]));
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    tree.levels.push_back(std::move(next));
  }
  return tree;
}

std::vector<Value> exact_sumset_tree(std::vector<std::vector<Value>> sets) {
  SumsetTree tree = exact_sumset_tree_levels(std::move(sets));
  return std::move(tree.levels.back().front());
}

std::vector<Value> weak_round(std::span<const Value> z, Value r) {
  if (r < 1) throw PreconditionError("rounding factor must be >= 1");
  std::vector<Value> out;
  out.reserve(z.size());
  for (Value v : z) {
    if (v < 0) throw PreconditionError("weak_round expects non-negative values");
    out.push_back(v / r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Value default_partition_L(const Rational& eps) {
  require_open_unit(eps);
  // Smallest L with L²·num ≥ den.
  Value L = 1;
  while (static_cast<Wide>(L) * L * eps.num < eps.den) ++L;
  return L;
}

Value partition_delta(const Rational& eps, Value sigma) {
  return std::max<Value>(1, narrow(static_cast<Wide>(eps.num) * sigma / (8 * static_cast<Wide>(eps.den))));
}

namespace {

bool contains(std::span<const Value> s, Value v) { return std::binary_search(s.begin(), s.end(), v); }

[[noreturn]] void not_in_set(Value v) {
  throw PreconditionError("value " + std::to_string(v) + " is not in the traced set");
}

void collect_bottom(const BottomTree& tree, std::size_t id, Value z, std::vector<std::size_t>& out,
                    std::span<const Value> items) {
  const BottomTree::Node& node = tree.nodes[id];
  if (node.leaf) {
    if (z == items[node.item]) {
      out.push_back(node.item);
    } else if (z != 0) {
      not_in_set(z);
    }
    return;
  }
  if (node.left == node.right) {  // empty part
    if (z != 0) not_in_set(z);
    return;
  }
  const SparseSet& a = tree.nodes[node.left].set;
  const SparseSet& b = tree.nodes[node.right].set;
  for (Value x : a.elems()) {
    if (x > z) break;
    if (b.contains(z - x)) {
      collect_bottom(tree, node.left, x, out, items);
      collect_bottom(tree, node.right, z - x, out, items);
      return;
    }
  }
  not_in_set(z);
}

// Splits v at node j of level `level` of the top tree into per-leaf values.
void collect_top(const SumsetTree& tree, std::size_t level, std::size_t j, Value v, std::vector<Value>& leaf_values) {
  if (level == 0) {
    leaf_values[j] = v;
    return;
  }
  const auto& below = tree.levels[level - 1];
  if (2 * j + 1 >= below.size()) {  // carried up unchanged
    collect_top(tree, level - 1, 2 * j, v, leaf_values);
    return;
  }
  const auto& a = below[2 * j];
  const auto& b = below[2 * j + 1];
  for (Value x : a) {
    if (x > v) break;
    if (contains(b, v - x)) {
      collect_top(tree, level - 1, 2 * j, x, leaf_values);
      collect_top(tree, level - 1, 2 * j + 1, v - x, leaf_values);
      return;
    }
  }
  not_in_set(v);
}

}  // namespace

std::vector<std::size_t> reconstruct_partition(const PartitionTrace& trace, std::span<const Value> items, Value s) {
  if (s < 0 || s % trace.r != 0 || !contains(trace.top.result(), s / trace.r)) not_in_set(s);
  std::vector<Value> rounded(trace.top.levels.front().size(), 0);
  collect_top(trace.top, trace.top.levels.size() - 1, 0, s / trace.r, rounded);
  std::vector<std::size_t> out;
  for (std::size_t leaf = 0; leaf < trace.top_inputs.size(); ++leaf) {
    const BottomTree& bottom = trace.bottoms[trace.top_inputs[leaf]];
    // First element (ascending) that rounds to the chosen value.
    const auto& z = bottom.set().vec();
    auto it = std::find_if(z.begin(), z.end(), [&](Value v) { return v / trace.r == rounded[leaf]; });
    if (it == z.end()) not_in_set(rounded[leaf]);
    collect_bottom(bottom, bottom.root, *it, out, items);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartitionRun solve_partition(const PartitionInstance& inst, const Rational& eps, std::optional<Value> L,
                             const MinConvEngine& engine) {
  inst.validate();
  require_open_unit(eps);
  PartitionRun run;
  run.result.epsilon = eps;
  run.sigma = inst.sigma;
  run.half = inst.sigma / 2;
  const std::span<const Value> items = inst.items;

  std::vector<std::size_t> chosen;
  auto largest = std::max_element(items.begin(), items.end());
  if (largest != items.end() && 2 * static_cast<Wide>(*largest) > inst.sigma) {
    // The largest item alone exceeds σ/2, so the best subset is everything else.
    const auto big = static_cast<std::size_t>(largest - items.begin());
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i != big) chosen.push_back(i);
    }
    run.big_item = true;
    run.chosen = inst.sigma - *largest;
    run.result.mode = SolveMode::exact_fallback;
    run.result.guarantee = "value = OPT";
  } else {
    run.delta = partition_delta(eps, inst.sigma);
    run.L = std::clamp<Value>(L.value_or(default_partition_L(eps)), 1, std::max<Value>(1, inst.sigma));
    run.r = std::max<Value>(1, run.delta / run.L);
    PartitionTrace& trace = run.trace;
    trace.r = run.r;
    trace.parts = greedy_partition_split(items, run.L);
    std::vector<std::vector<Value>> rounded;
    for (std::size_t p = 0; p < trace.parts.size(); ++p) {
      trace.bottoms.push_back(bottom_half_tree(items, trace.parts[p], run.delta, engine));
      if (trace.parts[p].empty()) continue;
      trace.top_inputs.push_back(p);
      rounded.push_back(weak_round(trace.bottoms.back().set().vec(), run.r));
    }
    trace.top = exact_sumset_tree_levels(std::move(rounded));
    const auto& top = trace.top.result();
    auto it = std::upper_bound(top.begin(), top.end(), run.half / run.r);
    run.chosen = *std::prev(it) * run.r;
    chosen = reconstruct_partition(trace, items, run.chosen);
    Value total = 0;
    for (std::size_t i : chosen) total += items[i];
    if (total > run.half) {
      std::vector<std::size_t> rest;
      std::size_t c = 0;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (c < chosen.size() && chosen[c] == i) {
          ++c;
        } else {
          rest.push_back(i);
        }
      }
      chosen.swap(rest);
    }
    run.result.mode = SolveMode::approx;
    run.result.delta = run.delta;
    run.result.guarantee = "(1-eps)*OPT <= value <= OPT";
  }
  run.result.witness = chosen;
  run.result.value = 0;
  for (std::size_t i : chosen) {
    run.result.value += items[i];
    run.result.witness_items.push_back(items[i]);
  }
  return run;
}

ApproxResult approximate_partition(const PartitionInstance& inst, const Rational& eps, std::optional<Value> L) {
  return solve_partition(inst, eps, L).result;
}

}  // namespace apxsum
