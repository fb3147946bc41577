#ifndef TWORO_REPORT_H_
#define TWORO_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tworo/bench.h"
#include "tworo/counters.h"
#include "tworo/model.h"

namespace tworo {

inline constexpr int kReportFormatVersion = 1;

enum class RunStatus { kOptimal, kInfeasible, kLimitReached };

std::string ToString(RunStatus status);
RunStatus RunStatusFromString(const std::string& s);

// One CCG iteration, canonical (minimize) sense.
struct CcgIterate {
  double master_value = 0.0;
  double phi = 0.0;
  double best_phi = 0.0;

  bool operator==(const CcgIterate&) const = default;
};

// Outcome of one solver run. Objective values are in the problem's stated
// sense unless marked canonical.
struct RunReport {
  std::string problem;
  std::string algorithm;
  std::string branching;
  RunStatus status = RunStatus::kOptimal;
  std::optional<double> value;
  // Best proven bound on the optimum.
  std::optional<double> bound;
  std::optional<BitVector> incumbent;
  // Second-stage policy pool at the incumbent (or at the root for lb-only).
  std::vector<Solution> pool;
  std::optional<double> root_bound;
  // 100 (value - root bound) / |value|, canonical sense.
  std::optional<double> root_gap;
  // lb-only runs: the adversary's scenario.
  std::optional<Scenario> worst_case;
  CountersSnapshot counters;
  std::vector<CcgIterate> ccg_history;
  std::optional<bench::MetricsReport> metrics;
  double seconds = 0.0;

  double MeanLowerBoundIterations() const {
    return counters.MeanLowerBoundIterations();
  }
  double MeanUpperBoundIterations() const {
    return counters.MeanUpperBoundIterations();
  }

  bool operator==(const RunReport&) const = default;
};

// The report as JSON. Timing lives under "timing" so callers can drop it
// before comparing.
nlohmann::json ToJson(const RunReport& report);
RunReport RunReportFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const Solution& z);
Solution SolutionFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const bench::MetricsReport& metrics);
bench::MetricsReport MetricsFromJson(const nlohmann::json& j);

}  // namespace tworo

#endif  // TWORO_REPORT_H_
