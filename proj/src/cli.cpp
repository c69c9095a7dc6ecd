#include "apxsum/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "apxsum/hardness.hpp"
#include "apxsum/partition.hpp"
#include "apxsum/rng.hpp"
#include "apxsum/scaling.hpp"
#include "apxsum/subsetsum.hpp"
#include "apxsum/testkit.hpp"

namespace apxsum {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string join(const std::vector<Value>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

void print_result(std::ostream& out, const ApproxResult& r, double elapsed_ms, bool json) {
  if (json) {
    out << to_json(r, elapsed_ms) << '\n';
    return;
  }
  out << "value: " << r.value << '\n'
      << "witness: " << join(r.witness_items) << '\n'
      << "epsilon: " << r.epsilon.to_string() << '\n'
      << "delta: " << r.delta << '\n'
      << "mode: " << to_string(r.mode) << '\n'
      << "elapsed_ms: " << elapsed_ms << '\n';
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
  if (!file) throw Error("failed writing '" + path + "'");
}

int set_threads(int jobs) {
  const int n = std::max(1, jobs);
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
  return n;
}

struct SolveOptions {
  std::string input;
  std::string eps = "0.01";
  std::uint64_t seed = 0;
  Value confidence = 4;
  std::string engine = "sparse";
  bool batch_levels = false;
  std::optional<Value> k;
  std::optional<Value> L;
  std::string via = "gap";
  bool json = false;
};

struct GenOptions {
  std::string kind = "subsetsum";
  std::size_t n = 10;
  Value max_item = 100;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string shape = "uniform";
  std::string output;
};

struct VerifyOptions {
  std::string kind = "subsetsum";
  std::size_t trials = 100;
  std::size_t n = 12;
  Value max_item = 1000;
  std::string eps = "1/4,1/16,1/64";
  std::uint64_t seed = 1;
  Value confidence = 4;
  int jobs = 1;
  double max_failure_rate = -1;
};

struct BenchOptions {
  std::string eps_sweep = "2^-6..2^-13";
  int repeat = 3;
  std::uint64_t seed = 1;
  std::optional<std::size_t> n;
  Value max_item = 1'000'000'000;
  std::optional<Value> L;
  std::string engine = "dense";
  Value confidence = 1;
  std::string csv;
  std::string sizes = "256,1024,4096";
  double density = 0.5;
  int jobs = 1;
};

Rational parse_eps(const std::string& text) {
  const Rational eps = Rational::parse(text);
  if (eps.num <= 0 || eps.num >= eps.den) throw ValidationError("--eps must lie strictly between 0 and 1");
  return eps;
}

SchemeConfig scheme_config(const SolveOptions& o) {
  SchemeConfig c;
  c.seed = o.seed;
  c.confidence = o.confidence;
  c.engine = parse_engine_kind(o.engine);
  c.batch_levels = o.batch_levels;
  c.k_override = o.k;
  return c;
}

int solve_subsetsum(const SolveOptions& o, std::ostream& out) {
  const Rational eps = parse_eps(o.eps);
  const SubsetSumInstance inst = load_subsetsum(o.input);
  const SchemeConfig config = scheme_config(o);
  const auto start = Clock::now();
  const ApproxResult r = approximate_subset_sum(inst, eps, config);
  print_result(out, r, ms_since(start), o.json);
  return kExitOk;
}

int solve_partition_cmd(const SolveOptions& o, std::ostream& out) {
  const Rational eps = parse_eps(o.eps);
  const PartitionInstance inst = load_partition(o.input);
  const auto start = Clock::now();
  const ApproxResult r = approximate_partition(inst, eps, o.L);
  print_result(out, r, ms_since(start), o.json);
  return kExitOk;
}

int solve_knapsack_cmd(const SolveOptions& o, std::ostream& out) {
  const KnapsackInstance inst = load_knapsack(o.input);
  if (o.via != "gap" && o.via != "dp") throw ValidationError("--via must be gap or dp");
  const auto start = Clock::now();
  nlohmann::ordered_json j;
  j["via"] = o.via;
  if (o.via == "dp") {
    const KnapsackAnswer a = bellman_knapsack(inst);
    j["decision"] = a.decision;
    j["optimum"] = a.optimum;
    j["chosen"] = a.chosen;
  } else {
    const ViaGapAnswer a = solve_knapsack_via_gap(inst, scheme_config(o));
    j["decision"] = a.decision;
    j["used_bellman"] = a.used_bellman;
  }
  j["elapsed_ms"] = ms_since(start);
  if (o.json) {
    out << j.dump() << '\n';
  } else {
    for (const auto& [key, value] : j.items()) out << key << ": " << value.dump() << '\n';
  }
  return kExitOk;
}

int reduce_cmd(const SolveOptions& o, const std::string& output, std::ostream& out) {
  const KnapsackInstance inst = load_knapsack(o.input);
  const GapInstance gap = knapsack_to_gap_instance(inst);
  const SubsetSumInstance ss = gap.to_subsetsum();
  std::ostringstream text;
  text << "# gap subset sum from a knapsack instance; eps = 1/(2W) = " << gap.eps.to_string() << '\n'
       << "# M' = " << to_string(gap.m_prime) << ", padded items = " << gap.padded.size() << '\n'
       << to_text(ss);
  if (output.empty()) {
    out << text.str();
  } else {
    write_file(output, text.str());
    out << "wrote " << ss.size() << " items, t = " << ss.target << ", eps = " << gap.eps.to_string() << " to "
        << output << '\n';
  }
  return kExitOk;
}

int gen_cmd(const GenOptions& o, std::ostream& out) {
  GenSpec spec;
  spec.kind = parse_instance_kind(o.kind);
  spec.n = o.n;
  spec.max_item = o.max_item;
  spec.density = o.density;
  spec.seed = o.seed;
  spec.shape = parse_shape(o.shape);
  std::ostringstream text;
  text << "# " << o.kind << " n=" << o.n << " max=" << o.max_item << " density=" << o.density
       << " shape=" << o.shape << " seed=" << o.seed << '\n'
       << to_text(gen_instance(spec));
  if (o.output.empty()) {
    out << text.str();
  } else {
    write_file(o.output, text.str());
  }
  return kExitOk;
}

struct TrialOutcome {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string detail;
};

int verify_cmd(const VerifyOptions& o, std::ostream& out) {
  if (o.n > 20) throw ValidationError("verify uses a brute-force oracle; --n must be <= 20");
  const std::vector<Rational> eps_list = parse_eps_sweep(o.eps);
  const bool randomized = o.kind != "partition";
  if (o.kind != "subsetsum" && o.kind != "partition" && o.kind != "knapsack") {
    throw ValidationError("verify supports subsetsum, partition and knapsack");
  }
  const double allowed = o.max_failure_rate >= 0 ? o.max_failure_rate : (randomized ? 0.01 : 0.0);
  std::vector<TrialOutcome> outcomes(o.trials);
  const int jobs = set_threads(o.jobs);

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t i = 0; i < o.trials; ++i) {
    TrialOutcome& t = outcomes[i];
    t.seed = o.seed + i;
    try {
      const Rational eps = eps_list[i % eps_list.size()];
      if (o.kind == "subsetsum") {
        const SubsetSumInstance inst = gen_subsetsum(o.n, o.max_item, 0.5, t.seed);
        SchemeConfig config;
        config.seed = t.seed;
        config.confidence = o.confidence;
        const ApproxResult r = approximate_subset_sum(inst, eps, config);
        const GuaranteeReport rep = verify_guarantee(inst, r, eps, bruteforce_opt(inst));
        t.ok = rep.pass();
        t.detail = rep.failing();
      } else if (o.kind == "partition") {
        const PartitionInstance inst = gen_partition(o.n, o.max_item, t.seed);
        const ApproxResult r = approximate_partition(inst, eps);
        const Value opt = subset_sums_bruteforce(inst.items, inst.sigma / 2).back();
        const GuaranteeReport rep = verify_partition_guarantee(inst, r, eps, opt);
        t.ok = rep.pass();
        t.detail = rep.failing();
      } else {
        const KnapsackInstance inst = gen_knapsack(o.n, o.max_item, 0.5, t.seed);
        SchemeConfig config;
        config.seed = t.seed;
        config.confidence = o.confidence;
        const bool expected = bellman_knapsack(inst).decision;
        t.ok = solve_knapsack_via_gap(inst, config).decision == expected;
        t.detail = "decision";
      }
    } catch (const std::exception& e) {
      t.ok = false;
      t.detail = std::string("error: ") + e.what();
    }
  }

  FailureTally tally;
  for (const TrialOutcome& t : outcomes) {
    tally.record(t.seed, t.ok);
    if (!t.ok) out << "FAIL seed=" << t.seed << " clause=" << t.detail << '\n';
  }
  out << "kind=" << o.kind << " trials=" << tally.trials << " failures=" << tally.failures()
      << " rate=" << tally.failure_rate() << " allowed=" << allowed << " seeds=" << o.seed << ".."
      << (o.seed + o.trials - (o.trials ? 1 : 0)) << " failing=[" << tally.seeds_string() << "]\n";
  return tally.failure_rate() <= allowed ? kExitOk : kExitFailure;
}

int bench_problem(const std::string& problem, const BenchOptions& o, std::ostream& out) {
  BenchConfig c;
  c.problem = problem;
  c.eps = parse_eps_sweep(o.eps_sweep);
  c.repeat = o.repeat;
  c.seed = o.seed;
  c.n = o.n.value_or(problem == "subsetsum" ? 8 : 64);
  c.max_item = o.max_item;
  c.L = o.L;
  c.engine = parse_engine_kind(o.engine);
  c.confidence = o.confidence;
  set_threads(o.jobs);
  const BenchReport report = bench_scaling(c);
  if (!o.csv.empty()) write_file(o.csv, report.csv());
  out << report.csv();
  return kExitOk;
}

int bench_minconv(const BenchOptions& o, std::ostream& out) {
  std::vector<std::size_t> sizes;
  {
    std::stringstream ss(o.sizes);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) sizes.push_back(std::stoul(part));
    }
  }
  if (sizes.empty()) throw ValidationError("no sizes given");
  set_threads(o.jobs);
  out << "engine,n,repeat,elapsed_ms\n";
  bool agree = true;
  for (std::size_t n : sizes) {
    std::vector<ExtValue> a(n);
    std::vector<ExtValue> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t r = draw(o.seed, {n, i});
      if (below(r, 1000) < static_cast<std::uint64_t>(o.density * 1000)) a[i] = static_cast<Value>(below(mix64(r), 1'000'000));
      const std::uint64_t s = draw(o.seed, {n, i, 1});
      if (below(s, 1000) < static_cast<std::uint64_t>(o.density * 1000)) b[i] = static_cast<Value>(below(mix64(s), 1'000'000));
    }
    const ExtSeq x(std::move(a));
    const ExtSeq y(std::move(b));
    std::optional<ExtSeq> first;
    for (EngineKind kind : {EngineKind::reference, EngineKind::dense, EngineKind::sparse}) {
      const MinConvEngine engine = make_engine(kind);
      engine(x, y);  // warm-up
      const auto start = Clock::now();
      ExtSeq c;
      for (int r = 0; r < o.repeat; ++r) c = engine(x, y);
      out << engine.name << ',' << n << ',' << o.repeat << ',' << ms_since(start) / o.repeat << '\n';
      if (!first) {
        first = c;
      } else if (!(c == *first)) {
        agree = false;
      }
    }
  }
  if (!agree) out << "# engines disagree\n";
  return agree ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximation schemes for subset sum and partition"};
  app.name("apxsum");
  app.require_subcommand(1);

  SolveOptions solve;
  GenOptions gen;
  VerifyOptions verify;
  BenchOptions bench;
  std::string reduce_output;
  std::function<int()> action;

  auto* gen_cmd_app = app.add_subcommand("gen", "Generate a reproducible random instance");
  gen_cmd_app->add_option("--kind", gen.kind, "subsetsum | partition | knapsack")->capture_default_str();
  gen_cmd_app->add_option("--n", gen.n, "Number of items")->capture_default_str();
  gen_cmd_app->add_option("--max", gen.max_item, "Largest item (M for knapsack)")->capture_default_str();
  gen_cmd_app->add_option("--density", gen.density, "Target (or budget) as a fraction of the total")
      ->capture_default_str();
  gen_cmd_app->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd_app->add_option("--shape", gen.shape, "uniform | clustered | two-scale")->capture_default_str();
  gen_cmd_app->add_option("--output,-o", gen.output, "Write to a file instead of stdout");
  gen_cmd_app->callback([&] { action = [&] { return gen_cmd(gen, out); }; });

  auto* solve_app = app.add_subcommand("solve", "Solve an instance");
  solve_app->require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", solve.input, "Instance file")->required();
    sub->add_flag("--json", solve.json, "Print a JSON object");
  };
  auto* solve_ss = solve_app->add_subcommand("subsetsum", "Approximate subset sum");
  add_common(solve_ss);
  solve_ss->add_option("--eps", solve.eps, "Accuracy, e.g. 0.01, 1/64, 2^-6")->capture_default_str();
  solve_ss->add_option("--seed", solve.seed)->capture_default_str();
  solve_ss->add_option("--confidence", solve.confidence, "Constant C in the round and k formulas")
      ->capture_default_str();
  solve_ss->add_option("--engine", solve.engine, "reference | dense | sparse")->capture_default_str();
  solve_ss->add_flag("--batch-levels", solve.batch_levels, "Pack same-level convolutions into one call");
  solve_ss->add_option("--k", solve.k, "Override the color-coding parameter k (>= 8)");
  solve_ss->callback([&] { action = [&] { return solve_subsetsum(solve, out); }; });

  auto* solve_pt = solve_app->add_subcommand("partition", "Approximate partition");
  add_common(solve_pt);
  solve_pt->add_option("--eps", solve.eps)->capture_default_str();
  solve_pt->add_option("--L", solve.L, "Number of parts (default ceil(eps^-1/2))");
  solve_pt->callback([&] { action = [&] { return solve_partition_cmd(solve, out); }; });

  auto* solve_ks = solve_app->add_subcommand("knapsack", "Decide a knapsack instance");
  add_common(solve_ks);
  solve_ks->add_option("--via", solve.via, "gap | dp")->capture_default_str();
  solve_ks->add_option("--seed", solve.seed)->capture_default_str();
  solve_ks->add_option("--confidence", solve.confidence)->capture_default_str();
  solve_ks->callback([&] { action = [&] { return solve_knapsack_cmd(solve, out); }; });

  auto* reduce_app = app.add_subcommand("reduce", "Instance reductions");
  reduce_app->require_subcommand(1);
  auto* reduce_kg = reduce_app->add_subcommand("knapsack-to-gap", "Knapsack to gap subset sum");
  reduce_kg->add_option("--input,-i", solve.input)->required();
  reduce_kg->add_option("--output,-o", reduce_output);
  reduce_kg->callback([&] { action = [&] { return reduce_cmd(solve, reduce_output, out); }; });

  auto* verify_app = app.add_subcommand("verify", "Check the guarantees against a brute-force oracle");
  verify_app->add_option("--kind", verify.kind, "subsetsum | partition | knapsack")->capture_default_str();
  verify_app->add_option("--trials", verify.trials)->capture_default_str();
  verify_app->add_option("--n", verify.n)->capture_default_str();
  verify_app->add_option("--max", verify.max_item)->capture_default_str();
  verify_app->add_option("--eps", verify.eps, "Comma list or power-of-two sweep")->capture_default_str();
  verify_app->add_option("--seed", verify.seed, "First seed; trial i uses seed+i")->capture_default_str();
  verify_app->add_option("--confidence", verify.confidence)->capture_default_str();
  verify_app->add_option("--jobs", verify.jobs, "Parallel trials")->capture_default_str();
  verify_app->add_option("--max-failure-rate", verify.max_failure_rate,
                         "Allowed failure fraction (default 0.01 randomized, 0 partition)");
  verify_app->callback([&] { action = [&] { return verify_cmd(verify, out); }; });

  auto* bench_app = app.add_subcommand("bench", "Benchmarks");
  bench_app->require_subcommand(1);
  auto* bench_mc = bench_app->add_subcommand("minconv", "Compare convolution engines");
  bench_mc->add_option("--sizes", bench.sizes)->capture_default_str();
  bench_mc->add_option("--repeat", bench.repeat)->capture_default_str();
  bench_mc->add_option("--density", bench.density, "Fraction of defined entries")->capture_default_str();
  bench_mc->add_option("--seed", bench.seed)->capture_default_str();
  bench_mc->add_option("--jobs", bench.jobs)->capture_default_str();
  bench_mc->callback([&] { action = [&] { return bench_minconv(bench, out); }; });
  for (const char* problem : {"subsetsum", "partition"}) {
    auto* sub = bench_app->add_subcommand(problem, std::string("Runtime against 1/eps for ") + problem);
    sub->add_option("--eps-sweep", bench.eps_sweep)->capture_default_str();
    sub->add_option("--repeat", bench.repeat)->capture_default_str();
    sub->add_option("--seed", bench.seed)->capture_default_str();
    sub->add_option("--n", bench.n, "Items (default 8 for subsetsum, 64 for partition)");
    sub->add_option("--max", bench.max_item)->capture_default_str();
    sub->add_option("--engine", bench.engine)->capture_default_str();
    sub->add_option("--csv", bench.csv, "Also write the CSV to a file");
    sub->add_option("--jobs", bench.jobs)->capture_default_str();
    if (std::string(problem) == "partition") {
      sub->add_option("--L", bench.L);
    } else {
      sub->add_option("--confidence", bench.confidence)->capture_default_str();
    }
    const std::string name = problem;
    sub->callback([&, name] { action = [&, name] { return bench_problem(name, bench, out); }; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace apxsum
