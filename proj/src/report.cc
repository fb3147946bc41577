#include "tworo/report.h"

#include <stdexcept>

namespace tworo {

using nlohmann::json;

namespace {

template <typename T>
json Optional(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> ReadOptional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json Bits(const BitVector& v) {
  json out = json::array();
  for (auto b : v) out.push_back(static_cast<int>(b));
  return out;
}

BitVector ReadBits(const json& j) {
  BitVector v;
  for (const json& b : j) {
    const int bit = b.get<int>();
    if (bit != 0 && bit != 1) throw std::invalid_argument("expected a 0/1 entry");
    v.push_back(static_cast<std::uint8_t>(bit));
  }
  return v;
}

}  // namespace

std::string ToString(RunStatus status) {
  switch (status) {
    case RunStatus::kOptimal:
      return "optimal";
    case RunStatus::kInfeasible:
      return "infeasible";
    case RunStatus::kLimitReached:
      return "limit_reached";
  }
  return "unknown";
}

RunStatus RunStatusFromString(const std::string& s) {
  if (s == "optimal") return RunStatus::kOptimal;
  if (s == "infeasible") return RunStatus::kInfeasible;
  if (s == "limit_reached") return RunStatus::kLimitReached;
  throw std::invalid_argument("unknown run status '" + s + "'");
}

json ToJson(const Solution& z) {
  return {{"x", Bits(z.x)}, {"y", Bits(z.y)}, {"g", z.g}, {"h", z.h}};
}

Solution SolutionFromJson(const json& j) {
  Solution z;
  z.x = ReadBits(j.at("x"));
  z.y = ReadBits(j.at("y"));
  z.g = j.at("g").get<double>();
  z.h = j.at("h").get<std::vector<double>>();
  return z;
}

json ToJson(const bench::MetricsReport& m) {
  return {{"adaptivity_gap", Optional(m.adaptivity_gap)},
          {"root_gap", Optional(m.root_gap)},
          {"policy_gap", Optional(m.policy_gap)},
          {"policy_gap_per_scenario", m.per_scenario},
          {"skipped_scenarios", m.skipped_scenarios},
          {"seed", m.seed}};
}

bench::MetricsReport MetricsFromJson(const json& j) {
  bench::MetricsReport m;
  m.adaptivity_gap = ReadOptional<double>(j, "adaptivity_gap");
  m.root_gap = ReadOptional<double>(j, "root_gap");
  m.policy_gap = ReadOptional<double>(j, "policy_gap");
  m.per_scenario = j.at("policy_gap_per_scenario").get<std::vector<double>>();
  m.skipped_scenarios = j.at("skipped_scenarios").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  return m;
}

json ToJson(const RunReport& r) {
  json j;
  j["format_version"] = kReportFormatVersion;
  j["problem"] = r.problem;
  j["algorithm"] = r.algorithm;
  j["branching"] = r.branching;
  j["status"] = ToString(r.status);
  j["value"] = Optional(r.value);
  j["bound"] = Optional(r.bound);
  j["incumbent"] = r.incumbent ? Bits(*r.incumbent) : json(nullptr);
  j["root_bound"] = Optional(r.root_bound);
  j["root_gap"] = Optional(r.root_gap);
  j["worst_case"] = r.worst_case ? json(r.worst_case->values) : json(nullptr);
  json pool = json::array();
  for (const Solution& z : r.pool) pool.push_back(ToJson(z));
  j["pool"] = pool;
  j["num_solutions"] = r.pool.size();
  const CountersSnapshot& c = r.counters;
  j["counters"] = {{"oracle_calls", c.oracle_calls},
                   {"seed_calls", c.seed_calls},
                   {"master_solves", c.master_solves},
                   {"nodes", c.nodes},
                   {"ccg_iterations", c.ccg_iterations},
                   {"cg_iterations_lb", c.cg_iterations_lb},
                   {"cg_iterations_ub", c.cg_iterations_ub},
                   {"i_lb", c.MeanLowerBoundIterations()},
                   {"i_ub", c.MeanUpperBoundIterations()}};
  json history = json::array();
  for (const CcgIterate& it : r.ccg_history) {
    history.push_back({{"master_value", it.master_value},
                       {"phi", it.phi},
                       {"best_phi", it.best_phi}});
  }
  j["ccg_history"] = history;
  j["metrics"] = r.metrics ? ToJson(*r.metrics) : json(nullptr);
  j["timing"] = {{"seconds", r.seconds}};
  return j;
}

RunReport RunReportFromJson(const json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kReportFormatVersion) {
    throw std::invalid_argument("unsupported report format_version " +
                                std::to_string(version));
  }
  RunReport r;
  r.problem = j.at("problem").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.branching = j.at("branching").get<std::string>();
  r.status = RunStatusFromString(j.at("status").get<std::string>());
  r.value = ReadOptional<double>(j, "value");
  r.bound = ReadOptional<double>(j, "bound");
  if (!j.at("incumbent").is_null()) r.incumbent = ReadBits(j.at("incumbent"));
  r.root_bound = ReadOptional<double>(j, "root_bound");
  r.root_gap = ReadOptional<double>(j, "root_gap");
  if (!j.at("worst_case").is_null()) {
    r.worst_case = Scenario{j.at("worst_case").get<std::vector<double>>()};
  }
  for (const json& z : j.at("pool")) r.pool.push_back(SolutionFromJson(z));
  const json& c = j.at("counters");
  r.counters.oracle_calls = c.at("oracle_calls").get<long>();
  r.counters.seed_calls = c.at("seed_calls").get<long>();
  r.counters.master_solves = c.at("master_solves").get<long>();
  r.counters.nodes = c.at("nodes").get<long>();
  r.counters.ccg_iterations = c.at("ccg_iterations").get<long>();
  r.counters.cg_iterations_lb = c.at("cg_iterations_lb").get<std::vector<int>>();
  r.counters.cg_iterations_ub = c.at("cg_iterations_ub").get<std::vector<int>>();
  for (const json& it : j.at("ccg_history")) {
    r.ccg_history.push_back({it.at("master_value").get<double>(),
                             it.at("phi").get<double>(),
                             it.at("best_phi").get<double>()});
  }
  if (!j.at("metrics").is_null()) r.metrics = MetricsFromJson(j.at("metrics"));
  r.seconds = j.at("timing").at("seconds").get<double>();
  return r;
}

}  // namespace tworo
