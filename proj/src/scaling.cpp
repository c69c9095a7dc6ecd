#include "apxsum/scaling.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "apxsum/partition.hpp"
#include "apxsum/subsetsum.hpp"
#include "apxsum/testkit.hpp"

namespace apxsum {

std::vector<Rational> parse_eps_sweep(std::string_view text) {
  std::vector<Rational> out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const Rational from = Rational::parse(text.substr(0, dots));
    const Rational to = Rational::parse(text.substr(dots + 2));
    auto is_power = [](const Rational& r) { return r.num == 1 && r.den > 1 && (r.den & (r.den - 1)) == 0; };
    if (!is_power(from) || !is_power(to)) throw ValidationError("sweep endpoints must be powers of two below 1");
    if (from.den > to.den) throw ValidationError("sweep must run from larger to smaller epsilon");
    for (Value d = from.den; d <= to.den; d *= 2) out.push_back({1, d});
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (!part.empty()) {
      out.push_back(Rational::parse(part));
      require_open_unit(out.back());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ValidationError("empty epsilon sweep");
  return out;
}

std::string BenchReport::csv() const {
  std::ostringstream out;
  out << "problem,eps,L,seed,elapsed_ms,value\n";
  for (const BenchPoint& p : points) {
    out << problem << ',' << p.eps.to_string() << ',' << p.L << ',' << p.seed << ',' << p.elapsed_ms << ','
        << p.value << '\n';
  }
  out << "# fitted_exponent=" << exponent << '\n';
  return out.str();
}

double fit_exponent(const std::vector<BenchPoint>& points) {
  if (points.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const BenchPoint& p : points) {
    const double x = std::log(1.0 / p.eps.to_double());
    const double y = std::log(std::max(p.elapsed_ms, 1e-6));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  return denom == 0 ? 0 : (n * sxy - sx * sy) / denom;
}

BenchReport bench_scaling(const BenchConfig& config) {
  if (config.eps.empty()) throw ValidationError("no epsilon values to benchmark");
  if (config.repeat < 1) throw ValidationError("repeat must be >= 1");
  BenchReport report;
  report.problem = config.problem;
  const bool subset = config.problem == "subsetsum";
  if (!subset && config.problem != "partition") throw ValidationError("unknown bench problem '" + config.problem + "'");

  const SubsetSumInstance ss = gen_subsetsum(config.n, config.max_item, 0.5, config.seed);
  const PartitionInstance pt = gen_partition(config.n, config.max_item, config.seed);
  const MinConvEngine engine = make_engine(config.engine);

  auto solve = [&](const Rational& eps, BenchPoint& point) {
    const auto start = std::chrono::steady_clock::now();
    if (subset) {
      SchemeConfig scheme;
      scheme.seed = config.seed;
      scheme.confidence = config.confidence;
      scheme.engine = config.engine;
      point.value = approximate_subset_sum(ss, eps, scheme).value;
    } else {
      const PartitionRun run = solve_partition(pt, eps, config.L, engine);
      point.value = run.result.value;
      point.L = run.L;
    }
    const auto stop = std::chrono::steady_clock::now();
    point.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  };

  BenchPoint warmup;
  solve(config.eps.front(), warmup);
  for (const Rational& eps : config.eps) {
    for (int r = 0; r < config.repeat; ++r) {
      BenchPoint point;
      point.eps = eps;
      point.seed = config.seed;
      solve(eps, point);
      report.points.push_back(point);
    }
  }
  report.exponent = fit_exponent(report.points);
  return report;
}

}  // namespace apxsum
