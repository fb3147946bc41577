#include "tworo/cg.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tworo/lp.h"

namespace tworo::cg {

SolutionPool::SolutionPool(std::vector<Solution> solutions) {
  for (Solution& z : solutions) Add(std::move(z));
}

bool SolutionPool::Add(Solution z) {
  if (Contains(z)) return false;
  solutions_.push_back(std::move(z));
  return true;
}

bool SolutionPool::Contains(const Solution& z) const {
  return std::any_of(solutions_.begin(), solutions_.end(),
                     [&z](const Solution& s) { return s.SameDecision(z); });
}

bool SolutionPool::SharesFirstStage() const {
  for (const Solution& z : solutions_) {
    if (z.x != solutions_.front().x) return false;
  }
  return true;
}

MasterSolution SolveMaster(const SolutionPool& pool, const UncertaintySet& u) {
  if (pool.empty()) throw std::invalid_argument("SolveMaster: empty pool");
  lp::LpProblem master;
  const int mu = master.AddVariable(-lp::kInf, lp::kInf, 1.0);
  const int offset = u.AddDeltaVariables(master);
  for (const Solution& z : pool) {
    // μ - (P^T h)·δ <= g + c_bar·h
    const std::vector<double> slope = u.TransposeMap(z.h);
    std::vector<std::pair<int, double>> terms{{mu, 1.0}};
    for (int j = 0; j < u.p(); ++j) {
      if (slope[j] != 0.0) terms.emplace_back(offset + j, -slope[j]);
    }
    master.AddRow(std::move(terms), lp::Relation::kLessEqual,
                  Evaluate(z, Scenario{u.c_bar()}));
  }
  const lp::LpResult r = lp::SolveLp(master);
  if (r.status != lp::LpStatus::kOptimal) {
    throw std::logic_error("SolveMaster: master LP " + lp::ToString(r.status));
  }
  MasterSolution out;
  out.c_star = u.Map(std::vector<double>(r.x.begin() + offset,
                                         r.x.begin() + offset + u.p()));
  // Report the value the adversary actually attains at c*, which differs from
  // the LP objective only by solver round-off.
  std::vector<double> values;
  values.reserve(pool.size());
  for (const Solution& z : pool) values.push_back(Evaluate(z, out.c_star));
  out.mu_star = *std::min_element(values.begin(), values.end());
  out.slacks.reserve(values.size());
  for (double v : values) out.slacks.push_back(v - out.mu_star);
  return out;
}

SolutionPool PurgeNonbinding(const SolutionPool& pool, const Scenario& c_star,
                             double mu_star, double tolerance) {
  SolutionPool kept;
  for (const Solution& z : pool) {
    if (Evaluate(z, c_star) <= mu_star + tolerance) kept.Add(z);
  }
  return kept;
}

LowerBoundResult LowerBound(const ProblemSpec& spec, const UncertaintySet& u,
                            const Oracle& oracle, const FixationSet& fix,
                            const SolutionPool& warm, Counters* counters,
                            CgRole role, const CgOptions& options) {
  if (spec.sense != Sense::kMinimize) {
    throw std::invalid_argument("LowerBound: spec must be canonical");
  }
  if (u.m() != spec.m) {
    throw std::invalid_argument("LowerBound: uncertainty set dimension " +
                                std::to_string(u.m()) + " != " +
                                std::to_string(spec.m));
  }
  for (const Solution& z : warm) {
    if (!fix.Admits(z.x)) {
      throw std::invalid_argument("LowerBound: warm pool violates fixations");
    }
  }
  LowerBoundResult result;
  result.pool = warm;
  bool seeded = false;
  auto record = [&] {
    if (counters != nullptr) {
      counters->RecordCgRun(role, result.iterations, seeded,
                            result.status == BoundStatus::kOptimal);
    }
  };
  auto to_solution = [&](const Decision& d) {
    Solution z = spec.MakeSolution(d.x, d.y);
    if (!fix.Admits(z.x)) {
      throw std::logic_error("LowerBound: oracle ignored fixations");
    }
    return z;
  };

  if (result.pool.empty()) {
    seeded = true;
    result.oracle_calls = 1;
    const std::optional<Decision> seed = oracle.Solve(NominalScenario(u), fix);
    if (!seed) {
      result.status = BoundStatus::kInfeasible;
      record();
      return result;
    }
    result.pool.Add(to_solution(*seed));
  }

  while (true) {
    if (result.iterations >= options.max_iterations) {
      throw std::runtime_error("LowerBound: iteration cap reached");
    }
    const MasterSolution master = SolveMaster(result.pool, u);
    ++result.iterations;
    if (!result.mu_history.empty() &&
        master.mu_star > result.mu_history.back() +
                             1e-7 * (1.0 + std::abs(result.mu_history.back()))) {
      throw std::logic_error("LowerBound: master value increased");
    }
    result.mu_history.push_back(master.mu_star);
    result.mu_star = master.mu_star;
    result.c_star = master.c_star;

    ++result.oracle_calls;
    const std::optional<Decision> response = oracle.Solve(master.c_star, fix);
    if (!response) {
      throw std::logic_error(
          "LowerBound: oracle reported infeasible on a nonempty restriction");
    }
    Solution z = to_solution(*response);
    const double value = Evaluate(z, master.c_star);
    if (value >= master.mu_star - options.termination_tolerance) {
      result.pool.Add(std::move(z));
      break;
    }
    if (result.pool.Contains(z)) {
      throw std::logic_error(
          "LowerBound: oracle returned a pool member below the master value");
    }
    result.pool.Add(std::move(z));
  }
  result.pool = PurgeNonbinding(result.pool, result.c_star, result.mu_star,
                                options.slack_tolerance);
  result.status = BoundStatus::kOptimal;
  record();
  return result;
}

LowerBoundResult EvaluateFirstStage(const BitVector& x, const ProblemSpec& spec,
                                    const UncertaintySet& u,
                                    const Oracle& oracle,
                                    const SolutionPool& warm,
                                    Counters* counters,
                                    const CgOptions& options) {
  if (static_cast<int>(x.size()) != spec.n1 || !spec.first_stage_feasible(x)) {
    throw std::invalid_argument("EvaluateFirstStage: x is not in X");
  }
  const FixationSet fix = FixationSet::FromFirstStage(x);
  SolutionPool restricted;
  for (const Solution& z : warm) {
    if (z.x == x) restricted.Add(z);
  }
  return LowerBound(spec, u, oracle, fix, restricted, counters,
                    CgRole::kUpperBound, options);
}

std::vector<double> AverageFirstStage(const SolutionPool& pool) {
  if (pool.empty()) throw std::invalid_argument("AverageFirstStage: empty pool");
  std::vector<double> x_bar(pool[0].x.size(), 0.0);
  for (const Solution& z : pool) {
    for (size_t i = 0; i < x_bar.size(); ++i) x_bar[i] += z.x[i];
  }
  for (double& v : x_bar) v /= pool.size();
  return x_bar;
}

ConvexCombination OptimalConvexCombination(const SolutionPool& pool,
                                           const UncertaintySet& u) {
  if (pool.empty()) {
    throw std::invalid_argument("OptimalConvexCombination: empty pool");
  }
  const int k = pool.size();
  const int p = u.p();
  // min Σλ(g + c_bar·h) + b·π + up·ρ - lo·σ
  //  s.t. A^T π + ρ - σ - Σ λ_z P^T h_z = 0,  Σλ = 1,  λ, π, ρ, σ >= 0,
  // solved as the maximization of the negated objective.
  lp::LpProblem problem;
  const Scenario nominal{u.c_bar()};
  std::vector<std::vector<std::pair<int, double>>> balance(p);
  std::vector<std::pair<int, double>> simplex;
  for (int z = 0; z < k; ++z) {
    const int var = problem.AddVariable(0.0, lp::kInf, -Evaluate(pool[z], nominal));
    simplex.emplace_back(var, 1.0);
    const std::vector<double> slope = u.TransposeMap(pool[z].h);
    for (int j = 0; j < p; ++j) {
      if (slope[j] != 0.0) balance[j].emplace_back(var, -slope[j]);
    }
  }
  for (const LinearRow& row : u.rows()) {
    const int var = problem.AddVariable(0.0, lp::kInf, -row.rhs);
    for (int j = 0; j < p; ++j) {
      if (row.coefficients[j] != 0.0) {
        balance[j].emplace_back(var, row.coefficients[j]);
      }
    }
  }
  for (int j = 0; j < p; ++j) {
    if (std::isfinite(u.delta_upper()[j])) {
      const int rho = problem.AddVariable(0.0, lp::kInf, -u.delta_upper()[j]);
      balance[j].emplace_back(rho, 1.0);
    }
    if (std::isfinite(u.delta_lower()[j])) {
      const int sigma = problem.AddVariable(0.0, lp::kInf, u.delta_lower()[j]);
      balance[j].emplace_back(sigma, -1.0);
    }
  }
  for (int j = 0; j < p; ++j) {
    problem.AddRow(std::move(balance[j]), lp::Relation::kEqual, 0.0);
  }
  problem.AddRow(std::move(simplex), lp::Relation::kEqual, 1.0);

  const lp::LpResult r = lp::SolveLp(problem);
  if (r.status != lp::LpStatus::kOptimal) {
    throw std::logic_error("OptimalConvexCombination: LP " +
                           lp::ToString(r.status));
  }
  ConvexCombination out;
  out.value = -r.objective;
  out.lambda.assign(r.x.begin(), r.x.begin() + k);
  double total = 0.0;
  for (double& l : out.lambda) {
    l = std::max(l, 0.0);
    total += l;
  }
  for (double& l : out.lambda) l /= total;
  out.x_bar.assign(pool[0].x.size(), 0.0);
  for (int z = 0; z < k; ++z) {
    for (size_t i = 0; i < out.x_bar.size(); ++i) {
      out.x_bar[i] += out.lambda[z] * pool[z].x[i];
    }
  }
  // Entries shared by every member are exact.
  for (size_t i = 0; i < out.x_bar.size(); ++i) {
    bool same = true;
    for (int z = 1; z < k; ++z) same = same && pool[z].x[i] == pool[0].x[i];
    if (same) out.x_bar[i] = pool[0].x[i];
  }
  return out;
}

}  // namespace tworo::cg
