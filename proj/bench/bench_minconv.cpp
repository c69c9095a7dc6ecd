#include <benchmark/benchmark.h>

#include "apxsum/minconv.hpp"
#include "apxsum/rng.hpp"

namespace {

using apxsum::ExtSeq;
using apxsum::ExtValue;

// Half of the entries defined, values below 10^6.
ExtSeq random_seq(std::size_t n, std::uint64_t salt) {
  std::vector<ExtValue> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t r = apxsum::draw(7, {salt, i});
    if (r & 1) v[i] = static_cast<apxsum::Value>(apxsum::below(r >> 1, 1'000'000));
  }
  return ExtSeq(std::move(v));
}

template <apxsum::EngineKind Kind>
void BM_MinConv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ExtSeq a = random_seq(n, 1);
  const ExtSeq b = random_seq(n, 2);
  const apxsum::MinConvEngine engine = apxsum::make_engine(Kind);
  for (auto _ : state) {
    ExtSeq c = engine(a, b);
    benchmark::DoNotOptimize(c);
  }
  state.SetComplexityN(state.range(0));
}

void BM_BatchMinConv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<apxsum::ConvInstance> batch;
  for (std::uint64_t r = 0; r < 8; ++r) batch.emplace_back(random_seq(n, 10 + r), random_seq(n, 20 + r));
  for (auto _ : state) {
    auto c = apxsum::batch_min_conv(batch);
    benchmark::DoNotOptimize(c);
  }
}

}  // namespace

BENCHMARK(BM_MinConv<apxsum::EngineKind::reference>)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK(BM_MinConv<apxsum::EngineKind::dense>)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK(BM_MinConv<apxsum::EngineKind::sparse>)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK(BM_BatchMinConv)->RangeMultiplier(4)->Range(64, 1024);

BENCHMARK_MAIN();
