#include "apxsum/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "apxsum/rng.hpp"

namespace apxsum {

std::vector<Value> naive_sumset(std::span<const Value> a, std::span<const Value> b, Value cap) {
  if (a.size() * b.size() > kNaiveSumsetLimit) {
    throw PreconditionError("naive sumset limited to |A|*|B| <= " + std::to_string(kNaiveSumsetLimit));
  }
  std::vector<Value> out;
  for (Value x : a) {
    for (Value y : b) {
      const Value s = checked_add(x, y);
      if (s <= cap) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Shape parse_shape(std::string_view name) {
  if (name == "uniform") return Shape::uniform;
  if (name == "clustered") return Shape::clustered;
  if (name == "two-scale") return Shape::two_scale;
  throw ValidationError("unknown shape '" + std::string(name) + "'");
}

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::uniform:
      return "uniform";
    case Shape::clustered:
      return "clustered";
    case Shape::two_scale:
      return "two-scale";
  }
  return "?";
}

namespace {

class Source {
 public:
  explicit Source(std::uint64_t seed) : seed_(seed) {}

  /// Uniform in [lo, hi].
  Value range(Value lo, Value hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<Value>(below(draw(seed_, {word(Stream::instance), counter_++}), span));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

double clamp_density(double d) { return std::clamp(d, 1e-9, 1.0); }

Value scaled(double fraction, Value total) {
  return std::max<Value>(1, static_cast<Value>(std::floor(fraction * static_cast<double>(total))));
}

std::vector<Value> draw_items(Source& src, std::size_t n, Value max_item, Shape shape, Value t_hint) {
  std::vector<Value> items;
  items.reserve(n);
  switch (shape) {
    case Shape::uniform:
      for (std::size_t i = 0; i < n; ++i) items.push_back(src.range(1, max_item));
      break;
    case Shape::clustered: {
      static constexpr Value kLayers[] = {8, 16, 32};
      for (std::size_t i = 0; i < n; ++i) {
        const Value k = kLayers[src.range(0, 2)];
        const Value centre = (t_hint + k - 1) / k;
        items.push_back(std::max<Value>(1, centre + src.range(-1, 1)));
      }
      break;
    }
    case Shape::two_scale: {
      const std::size_t big = std::max<std::size_t>(1, n / 8);
      const Value small_top = std::max<Value>(1, max_item / 64);
      for (std::size_t i = 0; i < n; ++i) {
        items.push_back(i < big ? src.range(std::max<Value>(1, max_item / 2), max_item) : src.range(1, small_top));
      }
      // Interleave so the big items are not always first.
      for (std::size_t i = n; i > 1; --i) {
        std::swap(items[i - 1], items[static_cast<std::size_t>(src.range(0, static_cast<Value>(i) - 1))]);
      }
      break;
    }
  }
  return items;
}

}  // namespace

SubsetSumInstance gen_subsetsum(std::size_t n, Value max_item, double density, std::uint64_t seed, Shape shape) {
  if (max_item < 1) throw ValidationError("max_item must be >= 1");
  Source src(seed);
  density = clamp_density(density);
  SubsetSumInstance inst;
  // Clustered items are placed around t/k, so t is fixed first from the
  // expected sum of a uniform instance.
  const Value t_hint = scaled(density, checked_mul(static_cast<Value>(std::max<std::size_t>(n, 1)), max_item) / 2);
  inst.items = draw_items(src, n, max_item, shape, std::max<Value>(t_hint, 32));
  inst.target = shape == Shape::clustered ? std::max<Value>(t_hint, 32) : scaled(density, sum_of(inst.items));
  inst.validate();
  return inst;
}

PartitionInstance gen_partition(std::size_t n, Value max_item, std::uint64_t seed, Shape shape) {
  if (max_item < 1) throw ValidationError("max_item must be >= 1");
  Source src(seed);
  const Value t_hint = std::max<Value>(32, checked_mul(static_cast<Value>(std::max<std::size_t>(n, 1)), max_item) / 4);
  return PartitionInstance::from_items(draw_items(src, n, max_item, shape, t_hint));
}

KnapsackInstance gen_knapsack(std::size_t n, Value max_abs, double density, std::uint64_t seed) {
  if (max_abs < 1) throw ValidationError("M must be >= 1");
  Source src(seed);
  KnapsackInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    inst.weights.push_back(src.range(1, max_abs));
    inst.values.push_back(src.range(1, max_abs));
  }
  inst.budget = std::min(max_abs, scaled(clamp_density(density), std::max<Value>(1, sum_of(inst.weights))));
  inst.goal = src.range(1, max_abs);
  inst.refresh_max_abs();
  inst.validate();
  return inst;
}

Instance gen_instance(const GenSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::subsetsum:
      return gen_subsetsum(spec.n, spec.max_item, spec.density, spec.seed, spec.shape);
    case InstanceKind::partition:
      return gen_partition(spec.n, spec.max_item, spec.seed, spec.shape);
    case InstanceKind::knapsack:
      return gen_knapsack(spec.n, spec.max_item, spec.density, spec.seed);
  }
  throw ValidationError("unknown instance kind");
}

Value bruteforce_opt(const SubsetSumInstance& inst) {
  return subset_sums_bruteforce(inst.items, inst.target).back();
}

bool GuaranteeReport::pass() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const ClauseCheck& c) { return c.pass; });
}

std::string GuaranteeReport::failing() const {
  for (const ClauseCheck& c : clauses) {
    if (!c.pass) return c.name;
  }
  return "";
}

std::string GuaranteeReport::to_string() const {
  std::ostringstream out;
  for (const ClauseCheck& c : clauses) {
    out << (c.pass ? "pass " : "FAIL ") << c.name << " margin=" << apxsum::to_string(c.margin_num);
    if (c.margin_den != 1) out << "/" << c.margin_den;
    out << '\n';
  }
  return out.str();
}

namespace {

ClauseCheck at_least(std::string name, Wide lhs, Wide rhs, Value den = 1) {
  return {std::move(name), lhs >= rhs, lhs - rhs, den};
}

ClauseCheck witness_clause(std::span<const Value> items, const ApproxResult& result) {
  bool ok = result.witness.size() == result.witness_items.size();
  std::set<std::size_t> seen;
  Wide sum = 0;
  for (std::size_t i = 0; ok && i < result.witness.size(); ++i) {
    const std::size_t idx = result.witness[i];
    ok = idx < items.size() && seen.insert(idx).second && items[idx] == result.witness_items[i];
    sum += result.witness_items[i];
  }
  ClauseCheck c{"witness-sum", ok && sum == result.value, sum - result.value, 1};
  return c;
}

}  // namespace

GuaranteeReport verify_guarantee(const SubsetSumInstance& inst, const ApproxResult& result, const Rational& eps,
                                 Value oracle_opt) {
  GuaranteeReport report;
  report.clauses.push_back(witness_clause(inst.items, result));
  report.clauses.push_back(at_least("value<=t", inst.target, result.value));
  report.clauses.push_back(at_least("value<=OPT", oracle_opt, result.value));
  const Wide floor_term = static_cast<Wide>(eps.den - eps.num) * inst.target;
  const Wide opt_term = static_cast<Wide>(oracle_opt) * eps.den;
  report.clauses.push_back(
      at_least("value>=min(OPT,(1-eps)t)", static_cast<Wide>(result.value) * eps.den, std::min(floor_term, opt_term),
               eps.den));
  return report;
}

GuaranteeReport verify_partition_guarantee(const PartitionInstance& inst, const ApproxResult& result,
                                           const Rational& eps, Value oracle_opt) {
  GuaranteeReport report;
  report.clauses.push_back(witness_clause(inst.items, result));
  report.clauses.push_back(at_least("value<=OPT", oracle_opt, result.value));
  report.clauses.push_back(at_least("value>=(1-eps)OPT", static_cast<Wide>(result.value) * eps.den,
                                    static_cast<Wide>(eps.den - eps.num) * oracle_opt, eps.den));
  return report;
}

std::string FailureTally::seeds_string(std::size_t limit) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < failing_seeds.size() && i < limit; ++i) out << (i ? "," : "") << failing_seeds[i];
  if (failing_seeds.size() > limit) out << ",...";
  return out.str();
}

}  // namespace apxsum
