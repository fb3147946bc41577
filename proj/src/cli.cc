#include "tworo/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include "CLI11.hpp"

#include "tworo/bench.h"
#include "tworo/ccg.h"
#include "tworo/cg.h"

namespace tworo::cli {

using nlohmann::json;

std::string ToString(Algorithm a) {
  switch (a) {
    case Algorithm::kBnb:
      return "bnb";
    case Algorithm::kCcg:
      return "ccg";
    case Algorithm::kLowerBoundOnly:
      return "lb-only";
    case Algorithm::kBruteForce:
      return "brute";
  }
  return "unknown";
}

Algorithm AlgorithmFromString(const std::string& s) {
  if (s == "bnb") return Algorithm::kBnb;
  if (s == "ccg") return Algorithm::kCcg;
  if (s == "lb-only") return Algorithm::kLowerBoundOnly;
  if (s == "brute") return Algorithm::kBruteForce;
  throw BadInput("unknown algorithm '" + s + "'");
}

void Validate(const GeneratorParams& params) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw BadInput("generator: " + what);
  };
  require(params.gamma_fraction >= 0.0 && params.gamma_fraction <= 1.0,
          "gamma fraction must lie in [0, 1]");
  require(params.deviation_multiplier >= 0.0 &&
              std::isfinite(params.deviation_multiplier),
          "deviation multiplier must be finite and >= 0");
  switch (params.problem) {
    case ProblemKind::kSahlp:
      require(params.n >= 2 && params.n <= 25, "hub location needs 2 <= n <= 25");
      break;
    case ProblemKind::kCapitalBudgeting:
      require(params.n >= 1 && params.n <= 30, "capital budgeting needs 1 <= n <= 30");
      require(params.m >= 1 && params.m <= 30, "capital budgeting needs 1 <= m <= 30");
      break;
    case ProblemKind::kExplicit:
      require(params.n >= 1 && params.n <= 8, "explicit instances need 1 <= n <= 8");
      require(params.m >= 1 && params.m <= 30, "explicit instances need 1 <= m <= 30");
      break;
  }
}

ProblemBundle Generate(const GeneratorParams& params) {
  Validate(params);
  switch (params.problem) {
    case ProblemKind::kSahlp: {
      problems::SahlpGeneratorOptions options;
      options.n = params.n;
      options.gamma_fraction = params.gamma_fraction;
      options.deviation_multiplier = params.deviation_multiplier;
      options.seed = params.seed;
      return MakeBundle(problems::GenerateSahlp(options));
    }
    case ProblemKind::kCapitalBudgeting:
      return MakeBundle(problems::GenerateCb({params.n, params.m, params.seed}));
    case ProblemKind::kExplicit: {
      std::mt19937_64 rng(params.seed);
      problems::ExplicitInstance instance =
          problems::RandomExplicit(params.n, params.n, params.m, 3, rng);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<double> c_bar(params.m), w_hat(params.m);
      for (int r = 0; r < params.m; ++r) {
        c_bar[r] = unit(rng);
        w_hat[r] = params.deviation_multiplier * unit(rng);
      }
      return MakeBundle(std::move(instance),
                        UncertaintySet::Budgeted(std::move(c_bar), std::move(w_hat),
                                                 params.gamma_fraction * params.m));
    }
  }
  throw std::logic_error("Generate: unknown problem kind");
}

ProblemBundle LoadOrGenerate(const RunConfig& config) {
  if (config.instance.empty()) return Generate(config.params);
  try {
    return LoadBundle(config.instance);
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
}

namespace {

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

RunReport SolveLowerBoundOnly(const ProblemSpec& spec, const UncertaintySet& u,
                              const Oracle& oracle) {
  const auto start = std::chrono::steady_clock::now();
  Counters counters;
  const cg::LowerBoundResult root =
      cg::LowerBound(spec, u, oracle, FixationSet(spec.n1), {}, &counters);
  RunReport report;
  report.problem = spec.name;
  report.algorithm = ToString(Algorithm::kLowerBoundOnly);
  if (root.status == cg::BoundStatus::kInfeasible) {
    report.status = RunStatus::kInfeasible;
  } else {
    report.bound = spec.ReportedValue(root.mu_star);
    report.root_bound = report.bound;
    report.pool = root.pool.solutions();
    report.worst_case = root.c_star;
  }
  report.counters = counters.Snapshot();
  report.seconds = Seconds(start);
  return report;
}

RunReport SolveBruteForce(const ProblemSpec& spec, const UncertaintySet& u) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.problem = spec.name;
  report.algorithm = ToString(Algorithm::kBruteForce);
  try {
    const bench::BruteForceResult result = bench::BruteForceSolve(spec, u);
    report.value = spec.ReportedValue(result.value);
    report.bound = report.value;
    report.incumbent = result.x;
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  } catch (const std::runtime_error&) {
    report.status = RunStatus::kInfeasible;
  }
  report.seconds = Seconds(start);
  return report;
}

// Value in canonical sense from a reported one.
double Canonical(const ProblemSpec& spec, double reported) {
  return spec.ReportedValue(reported);
}

}  // namespace

bench::PolicyGapResult EvaluatePool(const ProblemBundle& bundle,
                                    const std::vector<Solution>& pool,
                                    const BitVector& x, std::uint64_t seed,
                                    int scenarios) {
  if (scenarios < 1) throw BadInput("need at least one scenario");
  const ProblemSpec spec = bundle.CanonicalSpec();
  const auto oracle = bundle.MakeOracle();
  std::mt19937_64 rng(seed);
  std::vector<Scenario> sampled;
  for (int l = 0; l < scenarios; ++l) {
    sampled.push_back(bench::SampleScenario(bundle.uncertainty, rng));
  }
  return bench::PolicyGap(pool, x, spec, *oracle, sampled);
}

RunReport Solve(const ProblemBundle& bundle, const RunConfig& config) {
  const ProblemSpec spec = bundle.CanonicalSpec();
  const UncertaintySet& u = bundle.uncertainty;
  const auto oracle = bundle.MakeOracle();

  RunReport report;
  switch (config.algorithm) {
    case Algorithm::kBnb: {
      bnb::BnbConfig bnb_config;
      bnb_config.branching = config.branching;
      bnb_config.node_limit = config.node_limit;
      bnb_config.time_limit_seconds = config.time_limit_seconds;
      bnb_config.threads = config.threads;
      report = bnb::SolveBnb(spec, u, *oracle, bnb_config);
      break;
    }
    case Algorithm::kCcg: {
      ccg::CcgConfig ccg_config;
      ccg_config.time_limit_seconds = config.time_limit_seconds;
      report = ccg::SolveCcg(spec, u, *oracle, ccg_config);
      break;
    }
    case Algorithm::kLowerBoundOnly:
      return SolveLowerBoundOnly(spec, u, *oracle);
    case Algorithm::kBruteForce:
      report = SolveBruteForce(spec, u);
      break;
  }
  report.problem = ToString(bundle.kind()) + ":" + spec.name;
  if (report.status != RunStatus::kOptimal || !report.value) return report;

  bench::MetricsReport metrics;
  metrics.seed = config.params.seed;
  metrics.root_gap = report.root_gap;
  metrics.adaptivity_gap =
      bench::ComputeAdaptivityGap(spec, u, *oracle, Canonical(spec, *report.value))
          .percent;
  if (!report.pool.empty() && report.incumbent && config.scenarios > 0) {
    const bench::PolicyGapResult gap = EvaluatePool(
        bundle, report.pool, *report.incumbent, config.params.seed, config.scenarios);
    metrics.policy_gap = gap.average;
    metrics.per_scenario = gap.per_scenario;
    metrics.skipped_scenarios = gap.skipped;
  }
  report.metrics = metrics;
  return report;
}

double Agreement::Spread() const {
  const double values[] = {bnb_average, bnb_optimal, ccg, brute};
  const auto [lo, hi] = std::minmax_element(std::begin(values), std::end(values));
  return *hi - *lo;
}

Agreement CheckAgreement(const ProblemBundle& bundle) {
  const ProblemSpec spec = bundle.CanonicalSpec();
  const UncertaintySet& u = bundle.uncertainty;
  const auto oracle = bundle.MakeOracle();
  auto canonical_value = [&spec](const RunReport& r, const char* who) {
    if (r.status != RunStatus::kOptimal || !r.value) {
      throw std::runtime_error(std::string(who) + " did not finish: " +
                               ToString(r.status));
    }
    return Canonical(spec, *r.value);
  };

  Agreement a;
  bnb::BnbConfig avg;
  avg.branching = bnb::Branching::kAverage;
  const RunReport avg_report = bnb::SolveBnb(spec, u, *oracle, avg);
  a.bnb_average = canonical_value(avg_report, "bnb avg");
  a.root_bound = Canonical(spec, avg_report.root_bound.value());

  bnb::BnbConfig opt;
  opt.branching = bnb::Branching::kOptimal;
  a.bnb_optimal = canonical_value(bnb::SolveBnb(spec, u, *oracle, opt), "bnb opt");

  const RunReport ccg_report = ccg::SolveCcg(spec, u, *oracle);
  a.ccg = canonical_value(ccg_report, "ccg");
  a.ccg_history = ccg_report.ccg_history;

  a.brute = bench::BruteForceSolve(spec, u).value;
  return a;
}

namespace {

int ExitCode(RunStatus status) {
  switch (status) {
    case RunStatus::kOptimal:
      return kExitOk;
    case RunStatus::kInfeasible:
      return kExitInfeasible;
    case RunStatus::kLimitReached:
      return kExitLimit;
  }
  return kExitError;
}

void Emit(const json& j, const RunConfig& config, std::ostream& out) {
  if (config.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    WriteJsonFile(j, config.out);
  }
}

json ErrorObject(int code, const std::string& kind, const std::string& message) {
  return {{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
}

int RunVerify(const RunConfig& config, std::ostream& out) {
  if (config.count < 1) throw BadInput("verify: --count must be >= 1");
  json cases = json::array();
  bool all_agree = true;
  for (int k = 0; k < config.count; ++k) {
    GeneratorParams params = config.params;
    params.seed = config.params.seed + k;
    const ProblemBundle bundle = Generate(params);
    const Agreement a = CheckAgreement(bundle);
    const bool agree = a.Spread() <= 1e-6;
    all_agree = all_agree && agree;
    cases.push_back({{"seed", params.seed},
                     {"bnb_avg", a.bnb_average},
                     {"bnb_opt", a.bnb_optimal},
                     {"ccg", a.ccg},
                     {"brute", a.brute},
                     {"agree", agree}});
  }
  Emit({{"format_version", kReportFormatVersion},
        {"problem", ToString(config.params.problem)},
        {"cases", cases},
        {"all_agree", all_agree}},
       config, out);
  return all_agree ? kExitOk : kExitError;
}

int RunEvaluate(const RunConfig& config, std::ostream& out) {
  if (config.pool_path.empty()) throw BadInput("evaluate: --pool is required");
  const ProblemBundle bundle = LoadOrGenerate(config);
  RunReport saved;
  try {
    saved = RunReportFromJson(ReadJsonFile(config.pool_path));
  } catch (const std::exception& e) {
    throw BadInput(std::string("evaluate: ") + e.what());
  }
  if (!saved.incumbent || saved.pool.empty()) {
    throw BadInput("evaluate: report has no incumbent pool");
  }
  const bench::PolicyGapResult gap = EvaluatePool(
      bundle, saved.pool, *saved.incumbent, config.params.seed, config.scenarios);
  bench::MetricsReport metrics;
  metrics.policy_gap = gap.average;
  metrics.per_scenario = gap.per_scenario;
  metrics.skipped_scenarios = gap.skipped;
  metrics.seed = config.params.seed;
  json j = ToJson(metrics);
  j["format_version"] = kReportFormatVersion;
  j["warnings"] = gap.warnings;
  Emit(j, config, out);
  return kExitOk;
}

int Dispatch(const RunConfig& config, std::ostream& out) {
  if (config.verb == "generate") {
    Emit(ToJson(LoadOrGenerate(config)), config, out);
    return kExitOk;
  }
  if (config.verb == "evaluate") return RunEvaluate(config, out);
  if (config.verb == "verify") return RunVerify(config, out);
  const RunReport report = Solve(LoadOrGenerate(config), config);
  Emit(ToJson(report), config, out);
  return ExitCode(report.status);
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string problem = "sahlp";
  std::string algorithm = "bnb";
  std::string branching = "avg";

  CLI::App app{"Two-stage robust binary optimization"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", problem, "explicit | sahlp | cb")
        ->check(CLI::IsMember({"explicit", "sahlp", "cb"}));
    sub->add_option("--instance", config.instance, "instance file or 't1'");
    sub->add_option("--n", config.params.n, "generator size");
    sub->add_option("--m", config.params.m, "risk factors / scenario dimension");
    sub->add_option("--gamma-frac", config.params.gamma_fraction,
                    "budget as a fraction of the dimension");
    sub->add_option("--deviation-mult", config.params.deviation_multiplier,
                    "deviation multiplier");
    sub->add_option("--seed", config.params.seed, "generator and sampling seed");
    sub->add_option("--out", config.out, "output file (default stdout)");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  CLI::App* generate = app.add_subcommand("generate", "write a random instance");
  CLI::App* evaluate = app.add_subcommand("evaluate", "policy gap of a saved pool");
  CLI::App* verify = app.add_subcommand("verify", "three-way agreement suite");
  for (CLI::App* sub : {solve, generate, evaluate, verify}) add_common(sub);
  solve->add_option("--algo", algorithm, "bnb | ccg | lb-only | brute")
      ->check(CLI::IsMember({"bnb", "ccg", "lb-only", "brute"}));
  solve->add_option("--branching", branching, "avg | opt")
      ->check(CLI::IsMember({"avg", "opt"}));
  solve->add_option("--time-limit", config.time_limit_seconds, "seconds, 0 = none");
  solve->add_option("--node-limit", config.node_limit, "nodes, 0 = none");
  solve->add_option("--threads", config.threads, "bnb worker threads");
  for (CLI::App* sub : {solve, evaluate}) {
    sub->add_option("--scenarios", config.scenarios, "sampled scenarios");
  }
  evaluate->add_option("--pool", config.pool_path, "saved run report");
  verify->add_option("--count", config.count, "number of random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << ErrorObject(kExitBadInput, "bad_input", e.what()).dump() << '\n';
    return kExitBadInput;
  }

  for (CLI::App* sub : {solve, generate, evaluate, verify}) {
    if (sub->parsed()) config.verb = sub->get_name();
  }
  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    const json j = ErrorObject(code, kind, message);
    err << j.dump() << '\n';
    if (!config.out.empty()) {
      try {
        WriteJsonFile(j, config.out);
      } catch (const std::exception&) {
      }
    }
    return code;
  };
  try {
    config.params.problem = ProblemKindFromString(problem);
    config.algorithm = AlgorithmFromString(algorithm);
    config.branching = bnb::BranchingFromString(branching);
    if (config.threads < 1) throw BadInput("--threads must be >= 1");
    if (config.time_limit_seconds < 0.0 || config.node_limit < 0) {
      throw BadInput("limits must be >= 0");
    }
    if (!config.instance.empty() && config.verb == "verify") {
      throw BadInput("verify generates its own instances; drop --instance");
    }
    return Dispatch(config, out);
  } catch (const BadInput& e) {
    return fail(kExitBadInput, "bad_input", e.what());
  } catch (const std::exception& e) {
    return fail(kExitError, "error", e.what());
  }
}

}  // namespace tworo::cli
