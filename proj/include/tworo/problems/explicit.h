#ifndef TWORO_PROBLEMS_EXPLICIT_H_
#define TWORO_PROBLEMS_EXPLICIT_H_

#include <random>
#include <string>
#include <vector>

#include "tworo/model.h"

namespace tworo::problems {

struct ExplicitEntry {
  BitVector x;
  BitVector y;
  double g = 0.0;
  std::vector<double> h;

  bool operator==(const ExplicitEntry&) const = default;
};

// Z given as a list of feasible (x, y) with their objective terms.
struct ExplicitInstance {
  std::string name = "explicit";
  int n1 = 0;
  int n2 = 0;
  int m = 0;
  Sense sense = Sense::kMinimize;
  std::vector<ExplicitEntry> entries;

  bool operator==(const ExplicitInstance&) const = default;
};

// Throws std::invalid_argument on an empty list, inconsistent dimensions or a
// repeated (x, y).
void Validate(const ExplicitInstance& instance);

// X is the set of listed first stages in order of first appearance; Y(x)
// lists its entries in order. The linear encoding picks one entry per block
// with a selector binary.
ProblemSpec MakeSpec(const ExplicitInstance& instance);

// n1 = n2 = m = 1 with
//   (0,0): g=2,   h=0     (0,1): g=0,   h=3
//   (1,0): g=1.5, h=0     (1,1): g=0.5, h=1
ExplicitInstance ToyT1();
// [0, 1].
UncertaintySet ToyT1Uncertainty();

// Random instance: each x ∈ {0,1}^n1 is kept with probability 0.7 (at least
// one survives) and receives 1..max_per_x distinct second stages; g ~ U[0,10],
// h_r ~ U[-1,4].
ExplicitInstance RandomExplicit(int n1, int n2, int m, int max_per_x,
                                std::mt19937_64& rng);

}  // namespace tworo::problems

#endif  // TWORO_PROBLEMS_EXPLICIT_H_
