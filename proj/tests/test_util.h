#ifndef TWORO_TESTS_TEST_UTIL_H_
#define TWORO_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tworo/model.h"
#include "tworo/problems/explicit.h"

namespace tworo::testing {

// T1 solutions: z1=(0,0) z2=(0,1) z3=(1,0) z4=(1,1).
inline Solution T1Solution(int x, int y) {
  static const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  return spec.MakeSolution({static_cast<std::uint8_t>(x)},
                           {static_cast<std::uint8_t>(y)});
}

// max_{c∈[lo,hi]} min_k (g_k + c h_k) for scalar scenarios, by checking the
// endpoints and every pairwise crossing.
inline double WorstCaseOnInterval(const std::vector<std::pair<double, double>>& lines,
                                  double lo, double hi) {
  std::vector<double> candidates{lo, hi};
  for (size_t a = 0; a < lines.size(); ++a) {
    for (size_t b = a + 1; b < lines.size(); ++b) {
      const double dh = lines[a].second - lines[b].second;
      if (dh == 0.0) continue;
      const double c = (lines[b].first - lines[a].first) / dh;
      if (c > lo && c < hi) candidates.push_back(c);
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    double inner = std::numeric_limits<double>::infinity();
    for (const auto& [g, h] : lines) inner = std::min(inner, g + c * h);
    best = std::max(best, inner);
  }
  return best;
}

}  // namespace tworo::testing

#endif  // TWORO_TESTS_TEST_UTIL_H_
