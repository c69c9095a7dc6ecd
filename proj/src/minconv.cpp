#include "apxsum/minconv.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace apxsum {

ExtSeq ExtSeq::from_values(std::span<const Value> values) {
  return ExtSeq(std::vector<ExtValue>(values.begin(), values.end()));
}

std::size_t ExtSeq::defined_count() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [](const ExtValue& e) { return e.has_value(); }));
}

std::string to_string(const ExtSeq& seq) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out << ',';
    if (seq[i]) {
      out << *seq[i];
    } else {
      out << "_";
    }
  }
  out << ']';
  return out.str();
}

namespace {

void require_nonempty(const ExtSeq& a, const ExtSeq& b) {
  if (a.empty() || b.empty()) throw PreconditionError("convolution inputs must be non-empty");
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Work below this many pair evaluations stays on the calling thread.
constexpr std::size_t kParallelThreshold = 1 << 16;

struct DefinedRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  bool any = false;
};

DefinedRange defined_range(const ExtSeq& s) {
  DefinedRange r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i]) {
      if (!r.any) r.first = i;
      r.last = i;
      r.any = true;
    }
  }
  return r;
}

// Entries within ±2^59 let the dense kernel use a finite sentinel and plain
// additions: defined sums stay within ±2^60, any sum touching the sentinel is
// at least 2^61 - 2^59.
constexpr Value kDenseBound = Value{1} << 59;
constexpr Value kDenseSentinel = Value{1} << 61;
constexpr Value kDenseUndefinedFloor = Value{1} << 60;

bool dense_encodable(const ExtSeq& s, const DefinedRange& r) {
  for (std::size_t i = r.first; i <= r.last; ++i) {
    if (s[i] && (*s[i] > kDenseBound || *s[i] < -kDenseBound)) return false;
  }
  return true;
}

}  // namespace

namespace serial {

ExtSeq min_conv(const ExtSeq& a, const ExtSeq& b) {
  require_nonempty(a, b);
  std::vector<ExtValue> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j]) continue;
      const Value s = checked_add(*a[i], *b[j]);
      ExtValue& out = c[i + j];
      if (!out || s < *out) out = s;
    }
  }
  return ExtSeq(std::move(c));
}

}  // namespace serial

namespace parallel {

ExtSeq min_conv(const ExtSeq& a, const ExtSeq& b) {
  require_nonempty(a, b);
  const std::size_t out_len = a.size() + b.size() - 1;
  const DefinedRange ra = defined_range(a);
  const DefinedRange rb = defined_range(b);
  if (!ra.any || !rb.any) return ExtSeq::undefined(out_len);
  if (!dense_encodable(a, ra) || !dense_encodable(b, rb)) return parallel::min_conv_sparse(a, b);

  const std::size_t na = ra.last - ra.first + 1;
  const std::size_t nb = rb.last - rb.first + 1;
  std::vector<Value> va(na);
  std::vector<Value> vb_rev(nb);
  for (std::size_t i = 0; i < na; ++i) va[i] = a[ra.first + i].value_or(kDenseSentinel);
  for (std::size_t j = 0; j < nb; ++j) vb_rev[j] = b[rb.last - j].value_or(kDenseSentinel);

  // Local output index k covers global index k + ra.first + rb.first.
  const std::size_t local_len = na + nb - 1;
  std::vector<Value> c(local_len);
  const Value* pa = va.data();
  const Value* pb = vb_rev.data();
  const bool go_parallel = na * nb >= kParallelThreshold && thread_count() > 1;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::size_t k = 0; k < local_len; ++k) {
    // Pairs (i, k-i) with 0 <= i < na and 0 <= k-i < nb; B[k-i] = vb_rev[nb-1-k+i].
    const std::size_t lo = k + 1 > nb ? k + 1 - nb : 0;
    const std::size_t hi = std::min(k, na - 1);
    const Value* qb = pb + (nb - 1 - k);
    Value best = 2 * kDenseSentinel;
    for (std::size_t i = lo; i <= hi; ++i) {
      const Value s = pa[i] + qb[i];
      best = s < best ? s : best;
    }
    c[k] = best;
  }

  std::vector<ExtValue> out(out_len);
  const std::size_t offset = ra.first + rb.first;
  for (std::size_t k = 0; k < local_len; ++k) {
    if (c[k] < kDenseUndefinedFloor) out[offset + k] = c[k];
  }
  return ExtSeq(std::move(out));
}

ExtSeq min_conv_sparse(const ExtSeq& a, const ExtSeq& b) {
  require_nonempty(a, b);
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<std::size_t> ia;
  std::vector<Value> va;
  std::vector<std::size_t> ib;
  std::vector<Value> vb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) {
      ia.push_back(i);
      va.push_back(*a[i]);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j]) {
      ib.push_back(j);
      vb.push_back(*b[j]);
    }
  }
  if (ia.empty() || ib.empty()) return ExtSeq::undefined(out_len);

  const std::size_t k_first = ia.front() + ib.front();
  const std::size_t k_last = ia.back() + ib.back();
  const std::size_t span = k_last - k_first + 1;
  std::vector<Value> best(span);
  std::vector<unsigned char> hit(span, 0);

  const int threads = thread_count();
  const bool go_parallel = ia.size() * ib.size() >= kParallelThreshold && threads > 1;
  const std::size_t blocks = go_parallel ? std::min<std::size_t>(span, static_cast<std::size_t>(threads) * 4) : 1;
  const std::size_t block_len = (span + blocks - 1) / blocks;
  bool overflow = false;

#pragma omp parallel for schedule(dynamic) reduction(|| : overflow) if (go_parallel)
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const std::size_t lo_k = k_first + blk * block_len;
    const std::size_t hi_k = std::min(k_last, lo_k + block_len - 1);
    if (lo_k > hi_k) continue;
    for (std::size_t p = 0; p < ia.size(); ++p) {
      const std::size_t i = ia[p];
      if (i > hi_k) break;
      const std::size_t j_lo = lo_k > i ? lo_k - i : 0;
      const std::size_t j_hi = hi_k - i;
      auto it = std::lower_bound(ib.begin(), ib.end(), j_lo);
      for (auto q = static_cast<std::size_t>(it - ib.begin()); q < ib.size() && ib[q] <= j_hi; ++q) {
        Value s;
        if (__builtin_add_overflow(va[p], vb[q], &s)) {
          overflow = true;
          continue;
        }
        const std::size_t slot = i + ib[q] - k_first;
        if (!hit[slot] || s < best[slot]) {
          best[slot] = s;
          hit[slot] = 1;
        }
      }
    }
  }
  if (overflow) throw OverflowError("integer overflow in convolution");

  std::vector<ExtValue> out(out_len);
  for (std::size_t s = 0; s < span; ++s) {
    if (hit[s]) out[k_first + s] = best[s];
  }
  return ExtSeq(std::move(out));
}

}  // namespace parallel

EngineKind parse_engine_kind(std::string_view name) {
  if (name == "reference") return EngineKind::reference;
  if (name == "dense") return EngineKind::dense;
  if (name == "sparse") return EngineKind::sparse;
  throw ValidationError("unknown engine '" + std::string(name) + "'");
}

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::reference:
      return "reference";
    case EngineKind::dense:
      return "dense";
    case EngineKind::sparse:
      return "sparse";
  }
  return "?";
}

MinConvEngine make_engine(EngineKind kind) {
  switch (kind) {
    case EngineKind::reference:
      return {"reference", &serial::min_conv};
    case EngineKind::dense:
      return {"dense", &parallel::min_conv};
    case EngineKind::sparse:
      return {"sparse", &parallel::min_conv_sparse};
  }
  throw ValidationError("unknown engine");
}

const MinConvEngine& default_engine() {
  static const MinConvEngine engine = make_engine(EngineKind::sparse);
  return engine;
}

ExtSeq min_conv(const ExtSeq& a, const ExtSeq& b) { return default_engine()(a, b); }

namespace {

ExtSeq negated(const ExtSeq& s) {
  std::vector<ExtValue> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i]) {
      if (*s[i] == std::numeric_limits<Value>::min()) throw OverflowError("cannot negate entry");
      out[i] = -*s[i];
    }
  }
  return ExtSeq(std::move(out));
}

}  // namespace

ExtSeq max_conv(const ExtSeq& a, const ExtSeq& b, const MinConvEngine& engine) {
  return negated(engine(negated(a), negated(b)));
}

std::vector<Value> sentinel_wrap(const ExtSeq& a, Value m) {
  if (m < 4) throw PreconditionError("sentinel M must be at least 4");
  std::vector<Value> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) {
      out[i] = m;
      continue;
    }
    const Wide v = *a[i];
    if (4 * v > m || 4 * v < -static_cast<Wide>(m)) {
      throw PreconditionError("entry " + std::to_string(*a[i]) + " outside [-M/4, M/4] for M=" + std::to_string(m));
    }
    out[i] = *a[i];
  }
  return out;
}

ExtSeq sentinel_unwrap(std::span<const Value> c, Value m) {
  std::vector<ExtValue> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wide v = c[i];
    if (2 * v <= m && 2 * v >= -static_cast<Wide>(m)) {
      out[i] = c[i];
    } else if (4 * v >= 3 * static_cast<Wide>(m) && v <= 2 * static_cast<Wide>(m)) {
      out[i] = kUndefined;
    } else {
      throw PreconditionError("value " + std::to_string(c[i]) + " outside both sentinel bands");
    }
  }
  return ExtSeq(std::move(out));
}

MinConvEngine engine_from_plain(std::string name, PlainMinConv plain) {
  auto run = [plain = std::move(plain)](const ExtSeq& a, const ExtSeq& b) {
    require_nonempty(a, b);
    Wide largest = 1;
    for (const ExtSeq* s : {&a, &b}) {
      for (const ExtValue& e : s->entries()) {
        if (e) largest = std::max<Wide>(largest, *e < 0 ? -static_cast<Wide>(*e) : *e);
      }
    }
    // ⊥+⊥ = 2M must stay representable.
    const Value m = narrow(std::max<Wide>(4, 4 * largest));
    if (static_cast<Wide>(m) * 2 > kMaxValue) throw OverflowError("sentinel M too large");
    const std::vector<Value> wa = sentinel_wrap(a, m);
    const std::vector<Value> wb = sentinel_wrap(b, m);
    return sentinel_unwrap(plain(wa, wb), m);
  };
  return {std::move(name), std::move(run)};
}

Value batch_value_limit(std::size_t m) {
  const Wide denom = 4 * static_cast<Wide>(m) * static_cast<Wide>(m) + 2;
  return static_cast<Value>(static_cast<Wide>(kMaxValue) / denom);
}

namespace {

// Packing: instance r (1-based, sizes sorted non-increasing) occupies
// A[2s_r + i] = r²·2M + A_r[i]; then C[4s_r + k] = r²·4M + C_r[k]. Entries
// of other instances contribute at least (r²+1)·4M, so any read-back above
// 2M is ⊥.
std::vector<ExtSeq> packed_min_conv(std::span<const ConvInstance> instances, const MinConvEngine& engine,
                                    bool mirror) {
  const std::size_t m = instances.size();
  if (m == 0) return {};
  Value big_m = 1;
  for (const auto& [a, b] : instances) {
    if (a.empty() || a.size() != b.size()) throw PreconditionError("batched instances must be square and non-empty");
    for (const ExtSeq* s : {&a, &b}) {
      for (const ExtValue& e : s->entries()) {
        if (!e) continue;
        if (*e < 0) throw PreconditionError("batched entries must be non-negative");
        big_m = std::max(big_m, *e);
      }
    }
  }
  const Wide top = 4 * static_cast<Wide>(m) * static_cast<Wide>(m) * big_m + 2 * static_cast<Wide>(big_m);
  if (top > kMaxValue) {
    throw OverflowError("packing " + std::to_string(m) + " instances with M=" + std::to_string(big_m) +
                        " needs " + to_string(top) + ", beyond 63 bits");
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return instances[x].first.size() > instances[y].first.size(); });

  std::vector<std::size_t> offset(m + 1, 0);  // s_r for sorted position r-1
  for (std::size_t r = 0; r < m; ++r) offset[r + 1] = offset[r] + instances[order[r]].first.size();
  const std::size_t s = offset[m];

  std::vector<ExtValue> pa(4 * s);
  std::vector<ExtValue> pb(4 * s);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& [a, b] = instances[order[r]];
    const Wide rank = static_cast<Wide>(r + 1);
    const Value shift = static_cast<Value>(rank * rank * 2 * big_m);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i]) pa[2 * offset[r] + i] = shift + (mirror ? big_m - *a[i] : *a[i]);
      if (b[i]) pb[2 * offset[r] + i] = shift + (mirror ? big_m - *b[i] : *b[i]);
    }
  }

  const ExtSeq c = engine(ExtSeq(std::move(pa)), ExtSeq(std::move(pb)));

  std::vector<ExtSeq> results(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t n = instances[order[r]].first.size();
    const Wide rank = static_cast<Wide>(r + 1);
    const Value base = static_cast<Value>(rank * rank * 4 * big_m);
    std::vector<ExtValue> out(2 * n - 1);
    for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
      const ExtValue& v = c[4 * offset[r] + k];
      if (!v) continue;
      const Value local = *v - base;
      if (local > 2 * big_m) continue;
      out[k] = mirror ? 2 * big_m - local : local;
    }
    results[order[r]] = ExtSeq(std::move(out));
  }
  return results;
}

}  // namespace

std::vector<ExtSeq> batch_min_conv(std::span<const ConvInstance> instances, const MinConvEngine& engine) {
  return packed_min_conv(instances, engine, false);
}

std::vector<ExtSeq> batch_max_conv(std::span<const ConvInstance> instances, const MinConvEngine& engine) {
  return packed_min_conv(instances, engine, true);
}

}  // namespace apxsum
