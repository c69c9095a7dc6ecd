#include "apxsum/core.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace apxsum {

void SubsetSumInstance::validate() const {
  if (target < 1) throw ValidationError("target must be >= 1");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] < 1) throw ValidationError("item " + std::to_string(i) + " must be >= 1");
  }
}

PartitionInstance PartitionInstance::from_items(std::vector<Value> items) {
  PartitionInstance inst;
  inst.sigma = sum_of(items);
  inst.items = std::move(items);
  inst.validate();
  return inst;
}

void PartitionInstance::validate() const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] < 1) throw ValidationError("item " + std::to_string(i) + " must be >= 1");
  }
  if (sum_of(items) != sigma) throw ValidationError("sigma does not match the item sum");
}

void KnapsackInstance::refresh_max_abs() {
  Value m = std::max<Value>({1, budget, goal});
  for (Value w : weights) m = std::max(m, w < 0 ? -w : w);
  for (Value v : values) m = std::max(m, v < 0 ? -v : v);
  max_abs = m;
}

void KnapsackInstance::validate(KnapsackDomain domain) const {
  if (weights.size() != values.size()) throw ValidationError("weights and values differ in length");
  if (budget < 1) throw ValidationError("budget W must be >= 1");
  if (goal < 1) throw ValidationError("goal V must be >= 1");
  const Value min_weight = domain == KnapsackDomain::input ? 1 : 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < min_weight) throw ValidationError("weight " + std::to_string(i) + " out of range");
    if (domain == KnapsackDomain::input && values[i] < 1) {
      throw ValidationError("value " + std::to_string(i) + " must be >= 1");
    }
    if (weights[i] > max_abs || values[i] > max_abs || values[i] < -max_abs) {
      throw ValidationError("item " + std::to_string(i) + " exceeds M");
    }
  }
  if (budget > max_abs || goal > max_abs) throw ValidationError("W or V exceeds M");
}

InstanceKind parse_instance_kind(std::string_view name) {
  if (name == "subsetsum") return InstanceKind::subsetsum;
  if (name == "partition") return InstanceKind::partition;
  if (name == "knapsack") return InstanceKind::knapsack;
  throw ValidationError("unknown instance kind '" + std::string(name) + "'");
}

namespace {

struct Token {
  Value value;
  std::size_t line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r' && text[j] != '\n' &&
             text[j] != '#') {
        ++j;
      }
      Value v = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, v);
      if (ec == std::errc::result_out_of_range) {
        throw ParseError("number '" + std::string(text.substr(i, j - i)) + "' does not fit in 63 bits", line);
      }
      if (ec != std::errc() || ptr != text.data() + j) {
        throw ParseError("malformed integer '" + std::string(text.substr(i, j - i)) + "'", line);
      }
      tokens.push_back({v, line});
      i = j;
    }
  }
  return tokens;
}

class TokenReader {
 public:
  explicit TokenReader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& next(const char* what) {
    if (pos_ >= tokens_.size()) {
      throw ParseError(std::string("unexpected end of input, expected ") + what,
                       tokens_.empty() ? 1 : tokens_.back().line);
    }
    return tokens_[pos_++];
  }

  Value positive(const char* what) {
    const Token& t = next(what);
    if (t.value < 1) throw ParseError(std::string(what) + " must be >= 1", t.line);
    return t.value;
  }

  Value count(const char* what) {
    const Token& t = next(what);
    if (t.value < 0) throw ParseError(std::string(what) + " must be >= 0", t.line);
    return t.value;
  }

  void expect_end() const {
    if (pos_ < tokens_.size()) throw ParseError("trailing data after the last item", tokens_[pos_].line);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Instance parse_instance(std::string_view text, InstanceKind kind) {
  TokenReader in(tokenize(text));
  switch (kind) {
    case InstanceKind::subsetsum: {
      SubsetSumInstance inst;
      const Value n = in.count("item count n");
      inst.target = in.positive("target t");
      inst.items.reserve(static_cast<std::size_t>(std::min<Value>(n, 1 << 20)));
      for (Value i = 0; i < n; ++i) inst.items.push_back(in.positive("item"));
      in.expect_end();
      inst.validate();
      return inst;
    }
    case InstanceKind::partition: {
      const Value n = in.count("item count n");
      std::vector<Value> items;
      Value sigma = 0;
      for (Value i = 0; i < n; ++i) {
        const Token& t = in.next("item");
        if (t.value < 1) throw ParseError("item must be >= 1", t.line);
        if (__builtin_add_overflow(sigma, t.value, &sigma)) throw ParseError("item sum exceeds 63 bits", t.line);
        items.push_back(t.value);
      }
      in.expect_end();
      PartitionInstance inst;
      inst.items = std::move(items);
      inst.sigma = sigma;
      return inst;
    }
    case InstanceKind::knapsack: {
      KnapsackInstance inst;
      const Value n = in.count("item count n");
      inst.budget = in.positive("budget W");
      inst.goal = in.positive("goal V");
      for (Value i = 0; i < n; ++i) {
        inst.weights.push_back(in.positive("weight"));
        inst.values.push_back(in.positive("value"));
      }
      in.expect_end();
      inst.refresh_max_abs();
      inst.validate();
      return inst;
    }
  }
  throw ValidationError("unknown instance kind");
}

Instance load_instance(const std::string& path, InstanceKind kind) {
  std::ifstream file(path);
  if (!file) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_instance(buffer.str(), kind);
}

SubsetSumInstance load_subsetsum(const std::string& path) {
  return std::get<SubsetSumInstance>(load_instance(path, InstanceKind::subsetsum));
}

PartitionInstance load_partition(const std::string& path) {
  return std::get<PartitionInstance>(load_instance(path, InstanceKind::partition));
}

KnapsackInstance load_knapsack(const std::string& path) {
  return std::get<KnapsackInstance>(load_instance(path, InstanceKind::knapsack));
}

namespace {

void append_items(std::ostringstream& out, std::span<const Value> items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    out << items[i] << ((i + 1) % 16 == 0 || i + 1 == items.size() ? '\n' : ' ');
  }
}

}  // namespace

std::string to_text(const SubsetSumInstance& inst) {
  std::ostringstream out;
  out << inst.items.size() << ' ' << inst.target << '\n';
  append_items(out, inst.items);
  return out.str();
}

std::string to_text(const PartitionInstance& inst) {
  std::ostringstream out;
  out << inst.items.size() << '\n';
  append_items(out, inst.items);
  return out.str();
}

std::string to_text(const KnapsackInstance& inst) {
  std::ostringstream out;
  out << inst.size() << ' ' << inst.budget << ' ' << inst.goal << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) out << inst.weights[i] << ' ' << inst.values[i] << '\n';
  return out.str();
}

std::string to_text(const Instance& inst) {
  return std::visit([](const auto& v) { return to_text(v); }, inst);
}

bool is_delta_sparse(std::span<const Value> sorted, Value delta) {
  for (std::size_t i = 2; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 2] <= delta) return false;
  }
  return true;
}

SparseSet::SparseSet(std::vector<Value> elems, Value delta, Value cap)
    : elems_(std::move(elems)), delta_(delta), cap_(cap) {
  if (delta_ < 0) throw PreconditionError("negative sparsity parameter");
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 0) throw PreconditionError("sparse set element is negative");
    if (i > 0 && elems_[i] <= elems_[i - 1]) throw PreconditionError("sparse set is not strictly increasing");
  }
  if (capped() && !elems_.empty() && elems_.back() > cap_) throw PreconditionError("sparse set exceeds its cap");
  if (!is_delta_sparse(elems_, delta_)) throw PreconditionError("set is not delta-sparse");
}

bool SparseSet::contains(Value v) const { return std::binary_search(elems_.begin(), elems_.end(), v); }

std::string to_string(SolveMode mode) {
  return mode == SolveMode::approx ? "approx" : "exact-fallback";
}

std::string to_json(const ApproxResult& result, double elapsed_ms) {
  nlohmann::ordered_json j;
  j["value"] = result.value;
  j["witness"] = result.witness_items;
  j["epsilon"] = result.epsilon.to_double();
  j["delta"] = result.delta;
  j["mode"] = to_string(result.mode);
  j["elapsed_ms"] = elapsed_ms;
  return j.dump();
}

std::vector<Value> subset_sums_bruteforce(std::span<const Value> items, Value t) {
  if (items.size() > kBruteForceLimit) {
    throw PreconditionError("brute-force subset sums limited to " + std::to_string(kBruteForceLimit) + " items");
  }
  // Every subset either skips or takes each item; equal sums collapse after
  // each step so memory tracks the number of distinct sums.
  std::vector<Value> sums{0};
  std::vector<Value> shifted;
  std::vector<Value> merged;
  for (Value x : items) {
    shifted.clear();
    for (Value s : sums) {
      Value r;
      if (__builtin_add_overflow(s, x, &r) || r > t) break;
      shifted.push_back(r);
    }
    merged.clear();
    std::set_union(sums.begin(), sums.end(), shifted.begin(), shifted.end(), std::back_inserter(merged));
    sums.swap(merged);
  }
  return sums;
}

Value sum_of(std::span<const Value> items) {
  Value s = 0;
  for (Value x : items) s = checked_add(s, x);
  return s;
}

}  // namespace apxsum
