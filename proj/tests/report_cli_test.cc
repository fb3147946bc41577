#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "tworo/bnb.h"
#include "tworo/cli.h"
#include "tworo/counters.h"
#include "tworo/instance_io.h"
#include "tworo/linear_encoding.h"
#include "tworo/report.h"

namespace tworo {
namespace {

using nlohmann::json;

TEST(Counters, SnapshotsAreFrozen) {
  Counters counters;
  EXPECT_EQ(counters.Snapshot(), CountersSnapshot{});
  const CountersSnapshot before = counters.Snapshot();
  EXPECT_EQ(counters.Snapshot(), before);
  counters.AddNode();
  counters.RecordCgRun(CgRole::kLowerBound, 3, true, true);
  counters.RecordCgRun(CgRole::kUpperBound, 1, false, true);
  counters.RecordCgRun(CgRole::kLowerBound, 0, true, false);
  EXPECT_EQ(before, CountersSnapshot{});
  const CountersSnapshot after = counters.Snapshot();
  EXPECT_EQ(after.nodes, 1);
  EXPECT_EQ(after.oracle_calls, 6);
  EXPECT_EQ(after.seed_calls, 2);
  EXPECT_DOUBLE_EQ(after.MeanLowerBoundIterations(), 3.0);
  EXPECT_DOUBLE_EQ(after.MeanUpperBoundIterations(), 1.0);
}

TEST(RunReport, JsonRoundTrip) {
  RunReport r;
  r.problem = "explicit:t1";
  r.algorithm = "ccg";
  r.status = RunStatus::kLimitReached;
  r.value = -2.25;
  r.bound = -3.0;
  r.incumbent = BitVector{1, 0};
  r.pool = {{{1, 0}, {0, 1}, 0.5, {1.0, -0.25}}};
  r.root_bound = 0.125;
  r.worst_case = Scenario{{0.1, 0.2}};
  r.counters.oracle_calls = 7;
  r.counters.cg_iterations_lb = {1, 2};
  r.ccg_history = {{1.0, 2.0, 2.0}};
  bench::MetricsReport m;
  m.adaptivity_gap = 12.5;
  m.per_scenario = {0.0, 1.5};
  m.policy_gap = 0.75;
  m.seed = 99;
  r.metrics = m;
  r.seconds = 0.5;
  const json j = ToJson(r);
  EXPECT_TRUE(j.at("root_gap").is_null());
  EXPECT_EQ(j.at("num_solutions"), 1);
  EXPECT_EQ(RunReportFromJson(j), r);
  EXPECT_EQ(RunReportFromJson(json::parse(j.dump())), r);

  json wrong = j;
  wrong["format_version"] = kReportFormatVersion + 1;
  EXPECT_THROW(RunReportFromJson(wrong), std::invalid_argument);
}

TEST(Bundle, JsonRoundTripForEveryKind) {
  std::vector<ProblemBundle> bundles;
  bundles.push_back(LoadBundle("t1"));
  bundles.push_back(cli::Generate({ProblemKind::kSahlp, 4, 2, 0.1, 10.0, 3}));
  bundles.push_back(cli::Generate({ProblemKind::kCapitalBudgeting, 3, 2, 0.1, 1.0, 3}));
  bundles.push_back(cli::Generate({ProblemKind::kExplicit, 2, 3, 0.5, 1.0, 3}));
  // General polyhedral set with an unbounded side closed by a row.
  bundles.push_back(MakeBundle(
      problems::ToyT1(),
      UncertaintySet({0.0}, {1.0}, 1, {0.0}, {lp::kInf}, {{{1.0}, 0.75}})));
  for (const ProblemBundle& b : bundles) {
    const ProblemBundle back = BundleFromJson(json::parse(ToJson(b).dump()));
    EXPECT_EQ(back.instance, b.instance);
    EXPECT_EQ(ToJson(back), ToJson(b));
    EXPECT_EQ(back.uncertainty.kind(), b.uncertainty.kind());
    EXPECT_EQ(back.uncertainty.c_bar(), b.uncertainty.c_bar());
    EXPECT_EQ(back.uncertainty.deviation_map(), b.uncertainty.deviation_map());
  }
}

TEST(Bundle, RejectsMalformedInput) {
  json j = ToJson(LoadBundle("t1"));
  j["problem"] = "tsp";
  EXPECT_THROW(BundleFromJson(j), std::invalid_argument);
  json missing = ToJson(LoadBundle("t1"));
  missing.erase("uncertainty");
  EXPECT_THROW(BundleFromJson(missing), std::invalid_argument);
  EXPECT_THROW(LoadBundle("/nonexistent/instance.json"), std::invalid_argument);
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
  json Json() const { return json::parse(out); }
};

CliRun RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "tworo");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun run;
  run.code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

json WithoutTiming(json j) {
  j.erase("timing");
  return j;
}

TEST(Cli, ToySolveWithEveryAlgorithm) {
  const CliRun bnb = RunCli({"solve", "--problem", "explicit", "--instance", "t1", "--algo", "bnb"});
  ASSERT_EQ(bnb.code, cli::kExitOk) << bnb.err;
  const json report = bnb.Json();
  EXPECT_DOUBLE_EQ(report["value"].get<double>(), 1.5);
  EXPECT_EQ(report["counters"]["nodes"], 1);
  EXPECT_DOUBLE_EQ(report["counters"]["i_lb"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(report["metrics"]["adaptivity_gap"].get<double>(), 50.0);
  EXPECT_DOUBLE_EQ(report["root_gap"].get<double>(), 0.0);

  const CliRun brute = RunCli({"solve", "--problem", "explicit", "--instance", "t1", "--algo", "brute"});
  ASSERT_EQ(brute.code, cli::kExitOk);
  EXPECT_EQ(brute.Json()["value"], report["value"]);

  const CliRun lb = RunCli({"solve", "--problem", "explicit", "--instance", "t1", "--algo", "lb-only"});
  ASSERT_EQ(lb.code, cli::kExitOk);
  const json lb_report = lb.Json();
  EXPECT_TRUE(lb_report["incumbent"].is_null());
  EXPECT_TRUE(lb_report["value"].is_null());
  EXPECT_DOUBLE_EQ(lb_report["bound"].get<double>(), 1.5);
  EXPECT_FALSE(lb_report["pool"].empty());
  EXPECT_FALSE(lb_report["worst_case"].is_null());
}

TEST(Cli, BadInputGivesExitFourAndAnErrorObject) {
  const CliRun unknown = RunCli({"solve", "--algo", "simplex"});
  EXPECT_EQ(unknown.code, cli::kExitBadInput);
  EXPECT_TRUE(json::parse(unknown.err).contains("error"));
  const CliRun range = RunCli({"solve", "--problem", "sahlp", "--gamma-frac", "1.5"});
  EXPECT_EQ(range.code, cli::kExitBadInput);
  EXPECT_EQ(json::parse(range.err)["error"]["code"], cli::kExitBadInput);
  EXPECT_TRUE(range.out.empty());
  const CliRun missing = RunCli({"solve", "--instance", "/nonexistent.json"});
  EXPECT_EQ(missing.code, cli::kExitBadInput);
  EXPECT_EQ(RunCli({}).code, cli::kExitBadInput);
}

TEST(Cli, NodeLimitGivesExitThree) {
  for (int seed = 1; seed < 60; ++seed) {
    const std::vector<std::string> base{"solve", "--problem", "cb", "--n", "4",
                                        "--m", "2", "--seed", std::to_string(seed)};
    const CliRun full = RunCli(base);
    ASSERT_EQ(full.code, cli::kExitOk) << full.err;
    if (full.Json()["counters"]["nodes"].get<long>() < 2) continue;
    std::vector<std::string> limited = base;
    limited.insert(limited.end(), {"--node-limit", "1"});
    const CliRun r = RunCli(limited);
    EXPECT_EQ(r.code, cli::kExitLimit);
    EXPECT_EQ(r.Json()["status"], "limit_reached");
    return;
  }
  FAIL() << "no generated instance needed a second node";
}

TEST(Cli, SameSeedSameReport) {
  for (const char* algo : {"bnb", "ccg"}) {
    const std::vector<std::string> args{"solve", "--problem", "sahlp", "--n", "4",
                                        "--gamma-frac", "0.1", "--seed", "5",
                                        "--algo", algo};
    const CliRun a = RunCli(args), b = RunCli(args);
    ASSERT_EQ(a.code, cli::kExitOk) << a.err;
    EXPECT_EQ(WithoutTiming(a.Json()).dump(), WithoutTiming(b.Json()).dump()) << algo;
  }
}

TEST(Cli, GenerateSolveEvaluateThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "tworo_cli_test";
  std::filesystem::create_directories(dir);
  const std::string instance = (dir / "cb.json").string();
  const std::string report = (dir / "report.json").string();
  ASSERT_EQ(RunCli({"generate", "--problem", "cb", "--n", "3", "--m", "2", "--seed", "4",
                    "--out", instance})
                .code,
            cli::kExitOk);
  const CliRun solved = RunCli({"solve", "--instance", instance, "--out", report});
  ASSERT_EQ(solved.code, cli::kExitOk) << solved.err;
  EXPECT_TRUE(solved.out.empty());
  const RunReport saved = RunReportFromJson(ReadJsonFile(report));
  EXPECT_TRUE(saved.value);
  const CliRun evaluated = RunCli({"evaluate", "--instance", instance, "--pool", report,
                                   "--scenarios", "5", "--seed", "8"});
  ASSERT_EQ(evaluated.code, cli::kExitOk) << evaluated.err;
  const json gap = evaluated.Json();
  EXPECT_EQ(gap["policy_gap_per_scenario"].size() + gap["skipped_scenarios"].get<size_t>(),
            5u);
  for (const json& v : gap["policy_gap_per_scenario"]) EXPECT_GE(v.get<double>(), -1e-6);
  std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyAgreesOnSmallInstances) {
  const CliRun r = RunCli({"verify", "--problem", "explicit", "--n", "2", "--m", "2",
                           "--count", "3"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(r.Json()["all_agree"].get<bool>());
  EXPECT_EQ(r.Json()["cases"].size(), 3u);
}

}  // namespace
}  // namespace tworo
