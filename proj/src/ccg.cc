#include "tworo/ccg.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tworo/linear_encoding.h"

namespace tworo::ccg {

namespace {

bool SameScenario(const Scenario& a, const Scenario& b) {
  for (int r = 0; r < a.size(); ++r) {
    if (std::abs(a.values[r] - b.values[r]) > 1e-9) return false;
  }
  return true;
}

}  // namespace

CcgMaster BuildMaster(const ProblemSpec& spec,
                      const std::vector<Scenario>& scenarios) {
  if (!spec.encoding) {
    throw std::invalid_argument("BuildMaster: " + spec.name +
                                " has no linear encoding");
  }
  if (scenarios.empty()) {
    throw std::invalid_argument("BuildMaster: no scenarios");
  }
  ModelBuilder builder;
  CcgMaster master;
  for (int i = 0; i < spec.n1; ++i) master.x_vars.push_back(builder.AddBinary());
  master.mu_var = builder.AddContinuous(-lp::kInf, lp::kInf, -1.0);
  spec.encoding->AddFirstStageRows(builder, master.x_vars);
  for (const Scenario& c : scenarios) {
    const ScenarioBlock block =
        spec.encoding->AddScenarioBlock(builder, master.x_vars, c);
    LinearExpr cut;
    cut.Add(master.mu_var, 1.0);
    cut.Add(block.objective, -1.0);
    builder.AddRow(cut, lp::Relation::kGreaterEqual, 0.0);
  }
  master.problem = builder.Release();
  return master;
}

RunReport SolveCcg(const ProblemSpec& spec, const UncertaintySet& u,
                   const Oracle& oracle, const CcgConfig& config) {
  if (spec.sense != Sense::kMinimize) {
    throw std::invalid_argument("SolveCcg: spec must be canonical");
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  Counters counters;
  RunReport report;
  report.problem = spec.name;
  report.algorithm = "ccg";
  auto finish = [&](RunStatus status) {
    report.status = status;
    report.counters = counters.Snapshot();
    report.seconds = elapsed();
    return report;
  };

  std::vector<Scenario> scenarios{NominalScenario(u)};
  double best_phi = std::numeric_limits<double>::infinity();
  double last_master = -std::numeric_limits<double>::infinity();
  BitVector best_x;
  cg::SolutionPool best_pool;

  for (int iteration = 0;; ++iteration) {
    if (iteration >= config.max_iterations ||
        (config.time_limit_seconds > 0.0 &&
         elapsed() >= config.time_limit_seconds)) {
      if (!best_x.empty()) {
        report.value = spec.ReportedValue(best_phi);
        report.incumbent = best_x;
        report.pool = best_pool.solutions();
      }
      report.bound = spec.ReportedValue(last_master);
      return finish(RunStatus::kLimitReached);
    }
    const CcgMaster master = BuildMaster(spec, scenarios);
    const mip::MipResult solved = mip::SolveMip(master.problem,
                                                config.master_limits);
    if (solved.status == mip::MipStatus::kInfeasible) {
      return finish(RunStatus::kInfeasible);
    }
    if (solved.status != mip::MipStatus::kOptimal) {
      throw std::runtime_error("SolveCcg: master MIP ended with status " +
                               mip::ToString(solved.status));
    }
    counters.AddCcgIteration();
    const double master_value = -solved.objective;
    if (master_value < last_master - 1e-6 * (1.0 + std::abs(last_master))) {
      throw std::logic_error("SolveCcg: master value decreased");
    }
    last_master = std::max(last_master, master_value);
    BitVector x(spec.n1);
    for (int i = 0; i < spec.n1; ++i) {
      x[i] = std::lround(solved.x[master.x_vars[i]]) != 0;
    }

    cg::LowerBoundResult separation =
        cg::EvaluateFirstStage(x, spec, u, oracle, {}, &counters, config.cg);
    if (separation.status != cg::BoundStatus::kOptimal) {
      throw std::logic_error("SolveCcg: master returned x with empty Y(x)");
    }
    const double phi = separation.mu_star;
    if (phi < best_phi) {
      best_phi = phi;
      best_x = x;
      best_pool = separation.pool;
    }
    report.ccg_history.push_back({last_master, phi, best_phi});
    if (last_master >= best_phi - config.gap_tolerance) break;

    for (const Scenario& c : scenarios) {
      if (SameScenario(c, separation.c_star)) {
        throw std::logic_error(
            "SolveCcg: worst-case scenario already in the master");
      }
    }
    scenarios.push_back(separation.c_star);
  }

  report.value = spec.ReportedValue(best_phi);
  report.bound = report.value;
  report.incumbent = best_x;
  report.pool = best_pool.solutions();
  return finish(RunStatus::kOptimal);
}

}  // namespace tworo::ccg
