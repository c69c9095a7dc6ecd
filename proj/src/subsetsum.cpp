#include "apxsum/subsetsum.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "apxsum/rng.hpp"

namespace apxsum {

SchemeParams SchemeParams::freeze(const SchemeConfig& config, std::size_t n, Value t, Value delta) {
  if (config.confidence < 1) throw ValidationError("confidence C must be >= 1");
  if (delta < 1 || t < 1) throw PreconditionError("scheme needs t >= 1 and delta >= 1");
  SchemeParams p;
  p.confidence = config.confidence;
  p.seed = config.seed;
  const Wide ratio = (static_cast<Wide>(n) * t + delta - 1) / delta;
  const Wide lg = ceil_log2(ratio);
  p.k = narrow(std::max<Wide>(8, static_cast<Wide>(config.confidence) * lg * lg * lg));
  if (config.k_override) {
    if (*config.k_override < 8) throw ValidationError("k must be >= 8");
    p.k = *config.k_override;
  }
  p.rounds = narrow(std::max<Wide>(1, static_cast<Wide>(config.confidence) * lg));
  p.log_ratio = std::max(1, ceil_log2((static_cast<Wide>(t) + delta - 1) / delta));
  p.eta = Rational{1, 2 * static_cast<Value>(p.log_ratio)};
  return p;
}

Value split_target(Value t, Value delta, int log_ratio) {
  const Wide den = 4 * static_cast<Wide>(log_ratio);
  const Wide num = static_cast<Wide>(t) * (2 * static_cast<Wide>(log_ratio) + 1);
  return narrow((num + den - 1) / den + delta);
}

std::vector<SparseSet> SumsetExecutor::capped(std::span<const SumsetJob> jobs) const {
  std::vector<SparseSet> out;
  out.reserve(jobs.size());
  if (!batched_) {
    for (const SumsetJob& job : jobs) {
      out.push_back(capped_sumset(*job.a1, *job.a2, job.t, job.delta, engine_));
      calls_ += 8;
    }
    return out;
  }

  std::vector<SumsetPlan> plans;
  plans.reserve(jobs.size());
  std::vector<ConvInstance> instances;
  std::vector<Value> bounds;  // largest entry per instance
  for (const SumsetJob& job : jobs) {
    plans.push_back(plan_sumset(*job.a1, *job.a2, job.t, job.delta));
    Value bound = 1;
    for (const SparseSet* s : {job.a1, job.a2}) {
      if (!s->empty()) bound = std::max(bound, s->max());
    }
    for (const ConvInstance& pair : plans.back().pairs) {
      instances.push_back(pair);
      bounds.push_back(bound);
    }
  }

  std::vector<ExtSeq> mins(instances.size());
  std::vector<ExtSeq> maxs(instances.size());
  std::size_t begin = 0;
  while (begin < instances.size()) {
    std::size_t end = begin;
    Value m = 1;
    while (end < instances.size() && batch_value_limit(end - begin + 1) >= std::max(m, bounds[end])) {
      m = std::max(m, bounds[end]);
      ++end;
    }
    if (end == begin) {
      mins[begin] = engine_(instances[begin].first, instances[begin].second);
      maxs[begin] = max_conv(instances[begin].first, instances[begin].second, engine_);
      calls_ += 2;
      ++begin;
      continue;
    }
    const std::span<const ConvInstance> chunk(instances.data() + begin, end - begin);
    std::vector<ExtSeq> lo = batch_min_conv(chunk, engine_);
    std::vector<ExtSeq> hi = batch_max_conv(chunk, engine_);
    calls_ += 2;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      mins[begin + i] = std::move(lo[i]);
      maxs[begin + i] = std::move(hi[i]);
    }
    begin = end;
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const std::span<const ExtSeq> lo(mins.data() + 4 * j, 4);
    const std::span<const ExtSeq> hi(maxs.data() + 4 * j, 4);
    out.push_back(cap_result(finish_sumset(plans[j], lo, hi), jobs[j].t, jobs[j].delta));
  }
  return out;
}

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::greedy:
      return "greedy";
    case NodeKind::colorcoding:
      return "colorcoding";
    case NodeKind::split:
      return "split";
  }
  return "?";
}

namespace {

bool is_large(Value x, Value t, Value k) { return static_cast<Wide>(k) * x >= t; }

void run_greedy(TraceNode& node, std::span<const Value> items, Value delta) {
  node.prefix.assign(1, 0);
  Value sum = 0;
  for (std::size_t idx : node.items) {
    if (items[idx] > delta) throw PreconditionError("greedy step requires every item <= delta");
    sum = checked_add(sum, items[idx]);
    if (sum > node.t) break;
    node.prefix.push_back(sum);
  }
  node.result = sparsify(node.prefix, node.t, delta);
}

// Splits the items of one round into their color classes and prepares the
// fold steps. Empty classes are skipped: folding with {0} leaves a sparse set
// unchanged.
std::vector<ColorStep> color_round(const TraceNode& node, std::span<const Value> items, Value delta,
                                   const SchemeParams& params, Value round) {
  const auto k = static_cast<std::uint64_t>(params.k);
  const std::uint64_t colors = k * k;
  std::vector<std::pair<std::uint64_t, std::size_t>> colored;
  colored.reserve(node.items.size());
  for (std::size_t idx : node.items) {
    const std::uint64_t r = draw(params.seed, {node.key, word(Stream::color), static_cast<std::uint64_t>(round), idx});
    colored.emplace_back(below(r, colors), idx);
  }
  std::sort(colored.begin(), colored.end());
  std::vector<ColorStep> steps;
  for (std::size_t i = 0; i < colored.size();) {
    ColorStep step;
    std::size_t j = i;
    std::vector<Value> values{0};
    while (j < colored.size() && colored[j].first == colored[i].first) {
      step.part.push_back(colored[j].second);
      values.push_back(items[colored[j].second]);
      ++j;
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    step.z = sparsify(values, node.t, delta);
    steps.push_back(std::move(step));
    i = j;
  }
  return steps;
}

const SparseSet& round_result(const std::vector<ColorStep>& steps, const SparseSet& zero) {
  return steps.empty() ? zero : steps.back().after;
}

// Color coding for several nodes at once. All (node, round) chains advance in
// lockstep so each fold step is a single executor batch.
void run_color_coding(std::vector<TraceNode*> nodes, std::span<const Value> items, Value delta,
                      const SchemeParams& params, const SumsetExecutor& executor) {
  struct Chain {
    TraceNode* node;
    std::vector<ColorStep>* steps;
    SparseSet zero;
  };
  std::vector<Chain> chains;
  for (TraceNode* node : nodes) {
    for (std::size_t idx : node->items) {
      if (items[idx] > node->t || !is_large(items[idx], node->t, params.k)) {
        throw PreconditionError("color coding requires t/k <= x <= t for every item");
      }
    }
    node->rounds.assign(static_cast<std::size_t>(params.rounds), {});
    for (Value r = 0; r < params.rounds; ++r) {
      node->rounds[static_cast<std::size_t>(r)] = color_round(*node, items, delta, params, r);
    }
  }
  for (TraceNode* node : nodes) {
    for (auto& steps : node->rounds) chains.push_back({node, &steps, SparseSet::zero(delta, node->t)});
  }

  for (std::size_t j = 0;; ++j) {
    std::vector<SumsetJob> jobs;
    std::vector<ColorStep*> targets;
    for (Chain& c : chains) {
      if (c.steps->size() <= j) continue;
      const SparseSet* prev = j == 0 ? &c.zero : &(*c.steps)[j - 1].after;
      jobs.push_back({prev, &(*c.steps)[j].z, c.node->t, delta});
      targets.push_back(&(*c.steps)[j]);
    }
    if (jobs.empty()) break;
    std::vector<SparseSet> results = executor.capped(jobs);
    for (std::size_t i = 0; i < results.size(); ++i) targets[i]->after = std::move(results[i]);
  }

  for (TraceNode* node : nodes) {
    const SparseSet zero = SparseSet::zero(delta, node->t);
    std::vector<Value> all;
    for (const auto& steps : node->rounds) {
      const SparseSet& final_set = round_result(steps, zero);
      all.insert(all.end(), final_set.vec().begin(), final_set.vec().end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    node->result = sparsify(all, node->t, delta);
  }
}

class Splitter {
 public:
  Splitter(std::span<const Value> items, Value delta, const SchemeParams& params, const SumsetExecutor& executor)
      : items_(items), delta_(delta), params_(params), executor_(executor) {}

  SolveTrace run(Value t) {
    trace_.items.assign(items_.begin(), items_.end());
    trace_.delta = delta_;
    TraceNode root;
    root.t = t;
    root.key = 1;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i] <= t) root.items.push_back(i);
    }
    trace_.nodes.push_back(std::move(root));
    build();
    compute();
    return std::move(trace_);
  }

 private:
  void build() {
    // nodes grows while we scan it, so index rather than iterate.
    for (std::size_t id = 0; id < trace_.nodes.size(); ++id) {
      if (trace_.nodes[id].kind == NodeKind::colorcoding) continue;
      expand(id);
    }
  }

  void expand(std::size_t id) {
    const Value t = trace_.nodes[id].t;
    const int depth = trace_.nodes[id].depth;
    const std::uint64_t key = trace_.nodes[id].key;
    const std::vector<std::size_t> ids = trace_.nodes[id].items;
    Value largest = 0;
    for (std::size_t i : ids) largest = std::max(largest, items_[i]);
    trace_.max_depth = std::max(trace_.max_depth, depth);
    if (ids.empty() || largest <= delta_) {
      trace_.nodes[id].kind = NodeKind::greedy;
      return;
    }
    if (depth + 1 > params_.log_ratio) {
      throw std::logic_error("recursion depth exceeds ceil(log2(t/delta)) = " + std::to_string(params_.log_ratio));
    }

    TraceNode large;
    large.kind = NodeKind::colorcoding;
    large.t = t;
    large.depth = depth;
    large.key = draw(params_.seed, {key, word(Stream::child), 0});
    TraceNode left;
    TraceNode right;
    left.t = right.t = split_target(t, delta_, params_.log_ratio);
    left.depth = right.depth = depth + 1;
    left.key = draw(params_.seed, {key, word(Stream::child), 1});
    right.key = draw(params_.seed, {key, word(Stream::child), 2});
    for (std::size_t i : ids) {
      if (is_large(items_[i], t, params_.k)) {
        large.items.push_back(i);
      } else if (draw(params_.seed, {key, word(Stream::halve), i}) & 1) {
        right.items.push_back(i);
      } else {
        left.items.push_back(i);
      }
    }

    TraceNode& node = trace_.nodes[id];
    node.kind = NodeKind::split;
    node.large = trace_.nodes.size();
    node.left = node.large + 1;
    node.right = node.large + 2;
    trace_.nodes.push_back(std::move(large));
    trace_.nodes.push_back(std::move(left));
    trace_.nodes.push_back(std::move(right));
  }

  void compute() {
    for (int depth = trace_.max_depth; depth >= 0; --depth) {
      std::vector<TraceNode*> colored;
      std::vector<TraceNode*> splits;
      for (TraceNode& node : trace_.nodes) {
        if (node.depth != depth) continue;
        switch (node.kind) {
          case NodeKind::greedy:
            run_greedy(node, items_, delta_);
            break;
          case NodeKind::colorcoding:
            colored.push_back(&node);
            break;
          case NodeKind::split:
            splits.push_back(&node);
            break;
        }
      }
      if (!colored.empty()) run_color_coding(colored, items_, delta_, params_, executor_);
      if (splits.empty()) continue;

      std::vector<SumsetJob> jobs;
      for (TraceNode* node : splits) {
        jobs.push_back({&trace_.nodes[node->left].result, &trace_.nodes[node->right].result, node->t, delta_});
      }
      std::vector<SparseSet> small = executor_.capped(jobs);
      for (std::size_t i = 0; i < splits.size(); ++i) splits[i]->small = std::move(small[i]);
      jobs.clear();
      for (TraceNode* node : splits) {
        jobs.push_back({&trace_.nodes[node->large].result, &node->small, node->t, delta_});
      }
      std::vector<SparseSet> combined = executor_.capped(jobs);
      for (std::size_t i = 0; i < splits.size(); ++i) splits[i]->result = std::move(combined[i]);
    }
  }

  std::span<const Value> items_;
  Value delta_;
  const SchemeParams& params_;
  const SumsetExecutor& executor_;
  SolveTrace trace_;
};

TraceNode standalone_node(std::span<const Value> items, Value t) {
  TraceNode node;
  node.t = t;
  node.key = 1;
  node.items.resize(items.size());
  std::iota(node.items.begin(), node.items.end(), 0);
  return node;
}

}  // namespace

ColorCodingOutput color_coding(std::span<const Value> items, Value t, Value delta, const SchemeParams& params,
                               const SumsetExecutor& executor) {
  if (delta < 1) throw PreconditionError("delta must be >= 1");
  TraceNode node = standalone_node(items, t);
  node.kind = NodeKind::colorcoding;
  run_color_coding({&node}, items, delta, params, executor);
  SparseSet set = node.result;
  return {std::move(set), std::move(node)};
}

SparseSet greedy_small(std::span<const Value> items, Value t, Value delta) {
  TraceNode node = standalone_node(items, t);
  run_greedy(node, items, delta);
  return node.result;
}

SolveTrace recursive_splitting(std::span<const Value> items, Value t, Value delta, const SchemeParams& params,
                               const SumsetExecutor& executor) {
  if (delta < 1) throw PreconditionError("delta must be >= 1");
  if (t < 1) throw PreconditionError("t must be >= 1");
  return Splitter(items, delta, params, executor).run(t);
}

namespace {

class Rebuilder {
 public:
  explicit Rebuilder(const SolveTrace& trace) : trace_(trace) {}

  void collect(std::size_t id, Value v, std::vector<std::size_t>& out) const {
    const TraceNode& node = trace_.nodes[id];
    switch (node.kind) {
      case NodeKind::greedy: {
        auto it = std::lower_bound(node.prefix.begin(), node.prefix.end(), v);
        if (it == node.prefix.end() || *it != v) fail(v);
        const auto count = static_cast<std::size_t>(it - node.prefix.begin());
        out.insert(out.end(), node.items.begin(), node.items.begin() + static_cast<std::ptrdiff_t>(count));
        return;
      }
      case NodeKind::colorcoding:
        collect_colored(node, v, out);
        return;
      case NodeKind::split: {
        const auto [a, b] = split_value(trace_.nodes[node.large].result, node.small, v);
        collect(node.large, a, out);
        const auto [c, d] = split_value(trace_.nodes[node.left].result, trace_.nodes[node.right].result, b);
        collect(node.left, c, out);
        collect(node.right, d, out);
        return;
      }
    }
  }

 private:
  [[noreturn]] static void fail(Value v) {
    throw PreconditionError("value " + std::to_string(v) + " is not in the traced set");
  }

  static std::pair<Value, Value> split_value(const SparseSet& first, const SparseSet& second, Value v) {
    for (Value a : first.elems()) {
      if (a > v) break;
      if (second.contains(v - a)) return {a, v - a};
    }
    fail(v);
  }

  void collect_colored(const TraceNode& node, Value v, std::vector<std::size_t>& out) const {
    if (v == 0) return;
    for (const auto& steps : node.rounds) {
      if (steps.empty() || !steps.back().after.contains(v)) continue;
      for (std::size_t j = steps.size(); j-- > 0;) {
        const ColorStep& step = steps[j];
        const SparseSet zero = SparseSet::zero(trace_.delta, node.t);
        const SparseSet& prev = j == 0 ? zero : steps[j - 1].after;
        const auto [before, z] = split_value(prev, step.z, v);
        if (z != 0) {
          auto hit = std::find_if(step.part.begin(), step.part.end(),
                                  [&](std::size_t idx) { return trace_.items[idx] == z; });
          out.push_back(*hit);
        }
        v = before;
      }
      if (v != 0) fail(v);
      return;
    }
    fail(v);
  }

  const SolveTrace& trace_;
};

}  // namespace

std::vector<std::size_t> reconstruct(const SolveTrace& trace, Value v) {
  if (!trace.root().result.contains(v)) {
    throw PreconditionError("value " + std::to_string(v) + " is not in the root set");
  }
  std::vector<std::size_t> out;
  Rebuilder(trace).collect(0, v, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Value> ExactTable::sums() const {
  std::vector<Value> out;
  for (Value s = 0; s <= t; ++s) {
    if (reachable(s)) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> ExactTable::witness(std::span<const Value> items, Value s) const {
  if (!reachable(s)) throw PreconditionError("sum " + std::to_string(s) + " is not reachable");
  std::vector<std::size_t> out;
  while (s > 0) {
    const auto idx = static_cast<std::size_t>(reached_by[static_cast<std::size_t>(s)]);
    out.push_back(idx);
    s -= items[idx];
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExactTable exact_subset_sums(std::span<const Value> items, Value t) {
  if (t < 0) throw PreconditionError("negative target");
  if (t > kExactTargetLimit) {
    throw BudgetError("exact table for t=" + std::to_string(t) + " exceeds the limit of " +
                      std::to_string(kExactTargetLimit));
  }
  if (items.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw BudgetError("too many items for the exact table");
  }
  ExactTable table;
  table.t = t;
  table.reached_by.assign(static_cast<std::size_t>(t) + 1, -1);
  table.reached_by[0] = -2;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Value x = items[i];
    if (x > t) continue;
    // Descending so that s - x still reflects items before i.
    for (Value s = t; s >= x; --s) {
      auto& cell = table.reached_by[static_cast<std::size_t>(s)];
      if (cell == -1 && table.reached_by[static_cast<std::size_t>(s - x)] != -1) {
        cell = static_cast<std::int32_t>(i);
      }
    }
  }
  return table;
}

std::vector<Value> SubsetSumRun::root_set() const {
  if (trace) return trace->root().result.vec();
  if (exact) return exact->sums();
  return {0};
}

std::vector<std::size_t> SubsetSumRun::witness_for(std::span<const Value> items, Value v) const {
  if (trace) return reconstruct(*trace, v);
  if (exact) return exact->witness(items, v);
  if (v == 0) return {};
  throw PreconditionError("run holds no reconstruction data");
}

Value subset_sum_delta(const Rational& eps, Value t) { return std::min(eps.floor_times(t), t / 8); }

SubsetSumRun solve_subset_sum(const SubsetSumInstance& inst, const Rational& eps, const SchemeConfig& config) {
  inst.validate();
  require_open_unit(eps);
  SubsetSumRun run;
  run.result.epsilon = eps;
  const Value t = inst.target;
  const Value delta = subset_sum_delta(eps, t);
  if (delta < 1) {
    run.exact = exact_subset_sums(inst.items, t);
    run.result.mode = SolveMode::exact_fallback;
    run.result.delta = 0;
    run.result.guarantee = "value = OPT";
    const std::vector<Value> sums = run.exact->sums();
    run.result.value = sums.back();
  } else {
    run.params = SchemeParams::freeze(config, inst.size(), t, delta);
    const SumsetExecutor executor(make_engine(config.engine), config.batch_levels);
    run.trace = recursive_splitting(inst.items, t, delta, run.params, executor);
    run.engine_calls = executor.calls();
    run.result.mode = SolveMode::approx;
    run.result.delta = delta;
    run.result.guarantee = "value <= t and, with high probability, value >= min(OPT, (1-eps)t)";
    run.result.value = run.trace->root().result.max();
  }
  run.result.witness = run.witness_for(inst.items, run.result.value);
  for (std::size_t idx : run.result.witness) run.result.witness_items.push_back(inst.items[idx]);
  return run;
}

ApproxResult approximate_subset_sum(const SubsetSumInstance& inst, const Rational& eps, const SchemeConfig& config) {
  return solve_subset_sum(inst, eps, config).result;
}

}  // namespace apxsum
