#include "tworo/mip.h"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>

namespace tworo::mip {

std::string ToString(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal:
      return "optimal";
    case MipStatus::kInfeasible:
      return "infeasible";
    case MipStatus::kUnbounded:
      return "unbounded";
    case MipStatus::kLimitReached:
      return "limit_reached";
  }
  return "unknown";
}

namespace {

struct Node {
  double bound;  // parent relaxation value
  long sequence;
  int depth;
  // Per-binary fixing: -1 free, 0 or 1 fixed.
  std::vector<std::int8_t> fixing;
};

struct NodeOrder {
  // Best (largest) bound first, FIFO among equal bounds.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.sequence > b.sequence;
  }
};

}  // namespace

MipResult SolveMip(const MipProblem& problem, const MipLimits& limits) {
  const lp::LpProblem& relaxation = problem.lp;
  lp::Validate(relaxation);
  const int num_binaries = static_cast<int>(problem.binaries.size());
  for (int b : problem.binaries) {
    if (b < 0 || b >= relaxation.num_variables()) {
      throw std::invalid_argument("MipProblem: binary index out of range");
    }
    if (relaxation.lower[b] < 0.0 || relaxation.upper[b] > 1.0) {
      throw std::invalid_argument("MipProblem: binary bounds must lie in [0,1]");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  MipResult result;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long sequence = 0;
  open.push(Node{lp::kInf, sequence++, 0,
                 std::vector<std::int8_t>(num_binaries, -1)});
  double global_bound = lp::kInf;
  std::vector<double> lower, upper;
  lp::WarmStartLp node_lp(relaxation);

  while (!open.empty()) {
    const double top_bound = open.top().bound;
    if (result.has_incumbent && top_bound <= result.objective + limits.gap) {
      break;
    }
    // The best open bound only tightens: children inherit their parent's
    // relaxation value, which cannot exceed the parent's own bound.
    if (top_bound > global_bound + 1e-9 * (1.0 + std::abs(global_bound))) {
      throw std::logic_error("SolveMip: best bound increased");
    }
    global_bound = top_bound;
    if (result.nodes >= limits.node_limit ||
        elapsed() > limits.time_limit_seconds) {
      result.status = MipStatus::kLimitReached;
      result.best_bound = result.has_incumbent
                              ? std::max(top_bound, result.objective)
                              : top_bound;
      return result;
    }
    Node node = open.top();
    open.pop();
    ++result.nodes;
    if (node.depth > num_binaries + 1) {
      throw std::logic_error("SolveMip: depth exceeds binary count");
    }

    lower = relaxation.lower;
    upper = relaxation.upper;
    for (int k = 0; k < num_binaries; ++k) {
      if (node.fixing[k] >= 0) {
        lower[problem.binaries[k]] = node.fixing[k];
        upper[problem.binaries[k]] = node.fixing[k];
      }
    }
    const lp::LpResult lp_result = node_lp.Solve(lower, upper);
    if (lp_result.status == lp::LpStatus::kInfeasible) continue;
    if (lp_result.status == lp::LpStatus::kUnbounded) {
      result.status = MipStatus::kUnbounded;
      return result;
    }
    if (lp_result.status != lp::LpStatus::kOptimal) {
      throw std::runtime_error("SolveMip: LP relaxation " +
                               lp::ToString(lp_result.status));
    }
    const double value = std::min(lp_result.objective, node.bound);
    if (result.has_incumbent && value <= result.objective + limits.gap) {
      continue;
    }

    int branch = -1;
    double best_distance = lp::kInf;
    for (int k = 0; k < num_binaries; ++k) {
      const double v = lp_result.x[problem.binaries[k]];
      const double frac = v - std::floor(v);
      if (frac <= limits.integrality_tolerance ||
          frac >= 1.0 - limits.integrality_tolerance) {
        continue;
      }
      const double distance = std::abs(frac - 0.5);
      if (distance < best_distance) {
        best_distance = distance;
        branch = k;
      }
    }
    if (branch < 0) {
      result.has_incumbent = true;
      result.objective = lp_result.objective;
      result.x = lp_result.x;
      for (int b : problem.binaries) result.x[b] = std::round(result.x[b]);
      continue;
    }
    for (std::int8_t side : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{value, sequence++, node.depth + 1, node.fixing};
      child.fixing[branch] = side;
      open.push(std::move(child));
    }
  }

  if (!result.has_incumbent) {
    result.status = MipStatus::kInfeasible;
    return result;
  }
  result.status = MipStatus::kOptimal;
  result.best_bound = open.empty()
                          ? result.objective
                          : std::max(result.objective, open.top().bound);
  return result;
}

}  // namespace tworo::mip
