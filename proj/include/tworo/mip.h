#ifndef TWORO_MIP_H_
#define TWORO_MIP_H_

#include <limits>
#include <string>
#include <vector>

#include "tworo/lp.h"

namespace tworo::mip {

// An LP (maximize) in which the listed variables must take values in {0,1}.
struct MipProblem {
  lp::LpProblem lp;
  std::vector<int> binaries;
};

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kLimitReached };

std::string ToString(MipStatus status);

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = -lp::kInf;
  // Upper bound on the optimum (maximize sense).
  double best_bound = lp::kInf;
  int nodes = 0;
};

struct MipLimits {
  long node_limit = std::numeric_limits<long>::max();
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  double gap = 1e-6;
  double integrality_tolerance = 1e-6;
};

// Best-first LP-based branch and bound over the binary variables, branching
// on the most fractional one (ties to the lowest index). Throws
// std::runtime_error if an LP relaxation stalls.
MipResult SolveMip(const MipProblem& problem, const MipLimits& limits = {});

}  // namespace tworo::mip

#endif  // TWORO_MIP_H_
