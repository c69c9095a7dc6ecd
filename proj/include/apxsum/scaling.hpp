#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apxsum/minconv.hpp"
#include "apxsum/types.hpp"

namespace apxsum {

/// Parses "2^-6..2^-14" (every power of two in between) or a comma list.
std::vector<Rational> parse_eps_sweep(std::string_view text);

struct BenchConfig {
  std::string problem = "partition";  // subsetsum | partition
  std::vector<Rational> eps;
  int repeat = 3;
  std::uint64_t seed = 1;
  std::size_t n = 64;
  Value max_item = 1'000'000'000;
  std::optional<Value> L;  // partition only
  EngineKind engine = EngineKind::dense;
  Value confidence = 1;  // subsetsum only
};

struct BenchPoint {
  Rational eps;
  Value L = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0;
  Value value = 0;
};

struct BenchReport {
  std::string problem;
  std::vector<BenchPoint> points;
  double exponent = 0;

  /// Header problem,eps,L,seed,elapsed_ms,value and a trailing fitted-exponent comment.
  std::string csv() const;
};

/// Least-squares slope of log(elapsed) against log(1/ε).
double fit_exponent(const std::vector<BenchPoint>& points);

/// Runs one fixed instance at every ε, `repeat` times each, after one
/// discarded warm-up run. Timing covers the solve only.
BenchReport bench_scaling(const BenchConfig& config);

}  // namespace apxsum
