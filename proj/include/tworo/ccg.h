#ifndef TWORO_CCG_H_
#define TWORO_CCG_H_

#include <vector>

#include "tworo/cg.h"
#include "tworo/mip.h"
#include "tworo/model.h"
#include "tworo/report.h"

namespace tworo::ccg {

struct CcgMaster {
  mip::MipProblem problem;
  int mu_var = -1;
  std::vector<int> x_vars;
};

// min μ s.t. μ >= f(x, y^i, c^i), (x, y^i) ∈ Z for every listed scenario,
// stated as the maximization of -μ. Throws std::invalid_argument if the spec
// has no linear encoding or the scenario list is empty.
CcgMaster BuildMaster(const ProblemSpec& spec,
                      const std::vector<Scenario>& scenarios);

struct CcgConfig {
  double gap_tolerance = 1e-6;
  int max_iterations = 500;
  double time_limit_seconds = 0.0;
  mip::MipLimits master_limits;
  cg::CgOptions cg;
};

// Column-and-constraint generation. spec must be canonical.
RunReport SolveCcg(const ProblemSpec& spec, const UncertaintySet& u,
                   const Oracle& oracle, const CcgConfig& config = {});

}  // namespace tworo::ccg

#endif  // TWORO_CCG_H_
