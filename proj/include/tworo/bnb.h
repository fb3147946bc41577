#ifndef TWORO_BNB_H_
#define TWORO_BNB_H_

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tworo/cg.h"
#include "tworo/model.h"
#include "tworo/report.h"

namespace tworo::bnb {

enum class Branching { kAverage, kOptimal };

std::string ToString(Branching b);
Branching BranchingFromString(const std::string& s);

// What happened to a node; reported to BnbConfig::observer.
struct NodeEvent {
  enum class Kind { kProcessed, kPruned, kInfeasible };
  Kind kind = Kind::kProcessed;
  FixationSet fix;
  double bound = 0.0;
  int depth = 0;
  // kProcessed only: smallest bound still in the queue after the pop
  // (+inf if empty).
  double min_open_bound = 0.0;
  // kProcessed only: bound of the parent node (-inf at the root).
  double parent_bound = 0.0;
};

struct BnbConfig {
  Branching branching = Branching::kAverage;
  double gap_tolerance = 1e-6;
  long node_limit = 0;
  double time_limit_seconds = 0.0;
  // Round x̄ for the incumbent before falling back to pool first stages.
  bool round_incumbent = true;
  // Distinct pool first stages evaluated on the fallback path.
  int max_incumbent_candidates = 3;
  // Children are bounded concurrently when > 1 and the oracle allows it.
  int threads = 1;
  std::function<void(const NodeEvent&)> observer;
  cg::CgOptions cg;
};

// Free index with x̄_i closest to 0.5, lowest index on ties. Returns nullopt
// if no index is free.
std::optional<int> SelectBranchVar(const std::vector<double>& x_bar,
                                   const FixationSet& fix);

// Parent members consistent with the child's fixations.
cg::SolutionPool WarmStartFilter(const cg::SolutionPool& parent,
                                 const FixationSet& child_fix);

// Caches Φ(x) and its policy pool per first-stage decision.
class FirstStageEvaluator {
 public:
  struct Entry {
    double value = 0.0;
    cg::SolutionPool pool;
  };

  FirstStageEvaluator(const ProblemSpec& spec, const UncertaintySet& u,
                      const Oracle& oracle, Counters* counters,
                      cg::CgOptions options = {})
      : spec_(spec), u_(u), oracle_(oracle), counters_(counters),
        options_(options) {}

  const Entry& Evaluate(const BitVector& x, const cg::SolutionPool& warm = {});

 private:
  const ProblemSpec& spec_;
  const UncertaintySet& u_;
  const Oracle& oracle_;
  Counters* counters_;
  cg::CgOptions options_;
  // std::map keeps returned references valid as the cache grows.
  std::map<BitVector, Entry> cache_;
};

struct IncumbentCandidate {
  BitVector x;
  double value = 0.0;
  cg::SolutionPool pool;
};

// Feasible first-stage decision from a bounded node: exact when the pool
// shares one x, otherwise the rounded x̄ or the most frequent pool first
// stages, whichever evaluates best.
std::optional<IncumbentCandidate> MakeIncumbent(
    const cg::LowerBoundResult& node, const std::vector<double>& x_bar,
    const ProblemSpec& spec, FirstStageEvaluator& evaluator,
    const BnbConfig& config);

// Exact branch & bound over first-stage variables. spec must be canonical.
RunReport SolveBnb(const ProblemSpec& spec, const UncertaintySet& u,
                   const Oracle& oracle, const BnbConfig& config = {});

}  // namespace tworo::bnb

#endif  // TWORO_BNB_H_
