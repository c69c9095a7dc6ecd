#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apxsum/types.hpp"

namespace apxsum {

/// ⊥: an undefined sequence entry. It is neutral for min and max and
/// absorbing for addition.
inline constexpr std::nullopt_t kUndefined = std::nullopt;

using ExtValue = std::optional<Value>;

/// Sequence over Z ∪ {⊥}.
class ExtSeq {
 public:
  ExtSeq() = default;
  explicit ExtSeq(std::vector<ExtValue> entries) : entries_(std::move(entries)) {}
  ExtSeq(std::initializer_list<ExtValue> entries) : entries_(entries) {}

  static ExtSeq undefined(std::size_t n) { return ExtSeq(std::vector<ExtValue>(n)); }
  static ExtSeq from_values(std::span<const Value> values);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ExtValue& operator[](std::size_t i) const { return entries_[i]; }
  bool defined(std::size_t i) const { return entries_[i].has_value(); }
  std::span<const ExtValue> entries() const { return entries_; }
  std::size_t defined_count() const;

  bool operator==(const ExtSeq&) const = default;

 private:
  std::vector<ExtValue> entries_;
};

std::string to_string(const ExtSeq& seq);

/// A (Min,+)-convolution implementation. Output length is |A|+|B|-1.
struct MinConvEngine {
  std::string name;
  std::function<ExtSeq(const ExtSeq&, const ExtSeq&)> run;

  ExtSeq operator()(const ExtSeq& a, const ExtSeq& b) const { return run(a, b); }
};

enum class EngineKind {
  reference,  // serial double loop over every index pair
  dense,      // OpenMP, quadratic over the defined span of both inputs
  sparse,     // OpenMP, quadratic over defined entries only
};

EngineKind parse_engine_kind(std::string_view name);
std::string to_string(EngineKind kind);
MinConvEngine make_engine(EngineKind kind);
const MinConvEngine& default_engine();

namespace serial {

/// Reference kernel. C[k] = min over i+j=k of A[i]+B[j], skipping ⊥.
ExtSeq min_conv(const ExtSeq& a, const ExtSeq& b);

}  // namespace serial

namespace parallel {

/// Gather kernel over the span between the first and last defined entries.
ExtSeq min_conv(const ExtSeq& a, const ExtSeq& b);

/// Pair enumeration over defined entries, blocked by output index.
ExtSeq min_conv_sparse(const ExtSeq& a, const ExtSeq& b);

}  // namespace parallel

/// Default engine.
ExtSeq min_conv(const ExtSeq& a, const ExtSeq& b);

/// C[k] = max over i+j=k of A[i]+B[j], computed as -MinConv(-A, -B).
ExtSeq max_conv(const ExtSeq& a, const ExtSeq& b, const MinConvEngine& engine = default_engine());

/// Replaces ⊥ by M. Requires every defined entry in [-M/4, M/4].
std::vector<Value> sentinel_wrap(const ExtSeq& a, Value m);

/// Classifies MinConv outputs of wrapped inputs: [-M/2, M/2] is a value,
/// [3M/4, 2M] is ⊥; anything else is rejected.
ExtSeq sentinel_unwrap(std::span<const Value> c, Value m);

/// Plain integer MinConv without ⊥ support.
using PlainMinConv = std::function<std::vector<Value>(std::span<const Value>, std::span<const Value>)>;

/// Adapts a plain integer engine through sentinel_wrap/sentinel_unwrap.
MinConvEngine engine_from_plain(std::string name, PlainMinConv plain);

using ConvInstance = std::pair<ExtSeq, ExtSeq>;

/// Solves m square MinConv instances with one engine call by packing them
/// into a single pair of sequences of length 4·Σn_r. Defined entries must lie
/// in [0, M]. Each result has length 2n_r-1 and equals min_conv(A_r, B_r).
std::vector<ExtSeq> batch_min_conv(std::span<const ConvInstance> instances,
                                   const MinConvEngine& engine = default_engine());

/// MaxConv counterpart of batch_min_conv (entries mirrored as M - x).
std::vector<ExtSeq> batch_max_conv(std::span<const ConvInstance> instances,
                                   const MinConvEngine& engine = default_engine());

/// Largest M for which packing m instances stays within 63 bits, or 0.
Value batch_value_limit(std::size_t m);

}  // namespace apxsum
