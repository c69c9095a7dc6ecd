#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "apxsum/core.hpp"
#include "apxsum/minconv.hpp"

namespace apxsum {

/// apx⁻ and apx⁺ of b with respect to A ∪ {t+1}. With t = kUncapped there is
/// no t+1 element and upper may be missing too.
struct ApxBounds {
  std::optional<Value> lower;
  std::optional<Value> upper;
};

ApxBounds apx_bounds(Value b, std::span<const Value> a, Value t);

/// True iff A ⊆ B ⊆ [0,t] and every b ∈ B has apx⁺ − apx⁻ ≤ Δ.
/// Both inputs must be sorted; t = kUncapped drops the upper universe bound.
bool is_approximation(std::span<const Value> a, std::span<const Value> b, Value t, Value delta);

/// Left-to-right sweep keeping the last two elements: whenever the newest
/// kept element is within Δ of the one two back, the middle one is dropped.
/// The result is Δ-sparse and (t,Δ)-approximates B.
SparseSet sparsify(std::span<const Value> b, Value t, Value delta);

/// A ∩ [0,t'] with cap t'.
SparseSet shift_down(const SparseSet& a, Value t_prime);

/// sparsify(A1 ∪ A2).
SparseSet merge_union(const SparseSet& a1, const SparseSet& a2, Value t, Value delta);

/// Number of half-width intervals used to unfold subsets of [0,t]: 4⌈t/Δ⌉.
std::size_t unfold_intervals(Value t, Value delta);

/// X[2i] = min(I_i ∩ A), X[2i+1] = max(I_i ∩ A) over I_i = [iΔ/2, (i+1)Δ/2].
/// Elements on a boundary belong to both neighbouring intervals.
ExtSeq unfold(std::span<const Value> a, Value t, Value delta);

/// The convolutions behind one approximate sumset. Each unfolded sequence is
/// split into its even (interval minima) and odd (interval maxima) halves and
/// every half of A1 is paired with every half of A2; each pair is solved with
/// both MinConv and MaxConv. Pairing only like-parity entries keeps every
/// output within a window of width Δ.
struct SumsetPlan {
  Value t = 0;
  Value delta = 1;
  std::array<ConvInstance, 4> pairs;
};

SumsetPlan plan_sumset(const SparseSet& a1, const SparseSet& a2, Value t, Value delta);

/// Collects all defined convolution outputs and sparsifies them (uncapped).
SparseSet finish_sumset(const SumsetPlan& plan, std::span<const ExtSeq> min_results,
                        std::span<const ExtSeq> max_results);

/// Sparse (∞,Δ)-approximation of A1 + A2 for Δ-sparse A1, A2 ⊆ [0,t].
SparseSet unbounded_sumset(const SparseSet& a1, const SparseSet& a2, Value t, Value delta,
                           const MinConvEngine& engine = default_engine());

/// Sparse (t,Δ)-approximation of A1 ⊕_t A2.
SparseSet capped_sumset(const SparseSet& a1, const SparseSet& a2, Value t, Value delta,
                        const MinConvEngine& engine = default_engine());

/// Down-shift and sparsify an unbounded result; capped_sumset's last step.
SparseSet cap_result(const SparseSet& unbounded, Value t, Value delta);

}  // namespace apxsum
