#ifndef TWORO_CG_H_
#define TWORO_CG_H_

#include <vector>

#include "tworo/counters.h"
#include "tworo/model.h"

namespace tworo::cg {

// Ordered set of distinct solutions (Z').
class SolutionPool {
 public:
  SolutionPool() = default;
  explicit SolutionPool(std::vector<Solution> solutions);

  // Returns false (and leaves the pool unchanged) if z is already present.
  bool Add(Solution z);
  bool Contains(const Solution& z) const;

  int size() const { return static_cast<int>(solutions_.size()); }
  bool empty() const { return solutions_.empty(); }
  const Solution& operator[](int i) const { return solutions_[i]; }
  const std::vector<Solution>& solutions() const { return solutions_; }
  auto begin() const { return solutions_.begin(); }
  auto end() const { return solutions_.end(); }

  // True when every member has the same first-stage decision.
  bool SharesFirstStage() const;

 private:
  std::vector<Solution> solutions_;
};

struct CgOptions {
  double termination_tolerance = 1e-6;
  double slack_tolerance = 1e-6;
  int max_iterations = 100000;
};

struct MasterSolution {
  double mu_star = 0.0;
  Scenario c_star;
  // f(z, c*) - mu* per pool member.
  std::vector<double> slacks;
};

// max { μ : f(z, c) >= μ for z in pool, c ∈ U } as an LP in (μ, δ).
// Throws std::logic_error if the LP is not solved to optimality.
MasterSolution SolveMaster(const SolutionPool& pool, const UncertaintySet& u);

// Members with f(z, c*) <= μ* + tolerance.
SolutionPool PurgeNonbinding(const SolutionPool& pool, const Scenario& c_star,
                             double mu_star, double tolerance = 1e-6);

enum class BoundStatus { kOptimal, kInfeasible };

struct LowerBoundResult {
  BoundStatus status = BoundStatus::kInfeasible;
  double mu_star = 0.0;
  Scenario c_star;
  SolutionPool pool;
  int iterations = 0;
  int oracle_calls = 0;
  // Master values in iteration order (non-increasing).
  std::vector<double> mu_history;
};

// Column generation for max_{c∈U} min_{z∈conv(Z), fix} f(z, c). An empty warm
// pool is seeded with the oracle's answer at the nominal scenario. The spec
// must be canonical. Throws std::logic_error if the oracle returns a pool
// member that still violates the master cut (an inexact oracle).
LowerBoundResult LowerBound(const ProblemSpec& spec, const UncertaintySet& u,
                            const Oracle& oracle, const FixationSet& fix,
                            const SolutionPool& warm,
                            Counters* counters = nullptr,
                            CgRole role = CgRole::kLowerBound,
                            const CgOptions& options = {});

// Worst-case value max_{c∈U} min_{y∈Y(x)} f(x, y, c) of a first-stage decision,
// i.e. LowerBound under full fixation of x. Throws std::invalid_argument if
// x is not in X.
LowerBoundResult EvaluateFirstStage(const BitVector& x, const ProblemSpec& spec,
                                    const UncertaintySet& u,
                                    const Oracle& oracle,
                                    const SolutionPool& warm = {},
                                    Counters* counters = nullptr,
                                    const CgOptions& options = {});

// x̄_i = fraction of pool members with x_i = 1.
std::vector<double> AverageFirstStage(const SolutionPool& pool);

struct ConvexCombination {
  std::vector<double> lambda;
  std::vector<double> x_bar;
  // min_λ max_{c∈U} Σλ_z f(z, c); equals the master value of the same pool.
  double value = 0.0;
};

// Optimal convex combination of the pool, computed by dualizing the inner
// maximization over U.
ConvexCombination OptimalConvexCombination(const SolutionPool& pool,
                                           const UncertaintySet& u);

}  // namespace tworo::cg

#endif  // TWORO_CG_H_
