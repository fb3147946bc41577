#ifndef TWORO_COUNTERS_H_
#define TWORO_COUNTERS_H_

#include <mutex>
#include <vector>

namespace tworo {

// Immutable copy of the instrumentation counters.
struct CountersSnapshot {
  long oracle_calls = 0;
  // Oracle calls that seeded a column-generation run at the nominal scenario.
  long seed_calls = 0;
  long master_solves = 0;
  long nodes = 0;
  long ccg_iterations = 0;
  // Iterations of each column-generation run, split by purpose.
  std::vector<int> cg_iterations_lb;
  std::vector<int> cg_iterations_ub;

  double MeanLowerBoundIterations() const;
  double MeanUpperBoundIterations() const;

  bool operator==(const CountersSnapshot&) const = default;
};

enum class CgRole { kLowerBound, kUpperBound };

// Thread-safe accumulation point shared by the solvers.
class Counters {
 public:
  // One finished column-generation run. Its oracle calls are its iterations
  // plus one if it seeded itself at the nominal scenario. Runs that found
  // the restriction infeasible contribute their seed call only.
  void RecordCgRun(CgRole role, int iterations, bool seeded, bool feasible);
  void AddNode();
  void AddCcgIteration();

  CountersSnapshot Snapshot() const;

 private:
  mutable std::mutex mu_;
  CountersSnapshot data_;
};

}  // namespace tworo

#endif  // TWORO_COUNTERS_H_
