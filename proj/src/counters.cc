#include "tworo/counters.h"

#include <numeric>

namespace tworo {

namespace {

double Mean(const std::vector<int>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace

double CountersSnapshot::MeanLowerBoundIterations() const {
  return Mean(cg_iterations_lb);
}

double CountersSnapshot::MeanUpperBoundIterations() const {
  return Mean(cg_iterations_ub);
}

void Counters::RecordCgRun(CgRole role, int iterations, bool seeded,
                           bool feasible) {
  std::lock_guard<std::mutex> lock(mu_);
  data_.oracle_calls += iterations + (seeded ? 1 : 0);
  data_.master_solves += iterations;
  if (seeded) ++data_.seed_calls;
  if (!feasible) return;
  if (role == CgRole::kLowerBound) {
    data_.cg_iterations_lb.push_back(iterations);
  } else {
    data_.cg_iterations_ub.push_back(iterations);
  }
}

void Counters::AddNode() {
  std::lock_guard<std::mutex> lock(mu_);
  ++data_.nodes;
}

void Counters::AddCcgIteration() {
  std::lock_guard<std::mutex> lock(mu_);
  ++data_.ccg_iterations;
}

CountersSnapshot Counters::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return data_;
}

}  // namespace tworo
