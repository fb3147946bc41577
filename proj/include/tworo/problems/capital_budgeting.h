#ifndef TWORO_PROBLEMS_CAPITAL_BUDGETING_H_
#define TWORO_PROBLEMS_CAPITAL_BUDGETING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tworo/model.h"

namespace tworo::problems {

// Capital budgeting with deferral and two loans. First stage (x, x0): early
// projects and the early loan. Second stage (y, y0): deferred projects and the
// late loan. Scenario ξ ∈ [-1,1]^m drives profits (1 + ½ Q_i·ξ) p̄_i.
// Maximize.
struct CbInstance {
  std::string name = "cb";
  int n = 0;
  int m = 0;
  std::vector<double> cost;
  std::vector<double> profit;   // p̄
  std::vector<double> loading;  // Q, n x m row-major
  double budget = 0.0;
  double early_loan = 0.0;      // C1
  double late_loan = 0.0;       // C2
  double loan_rate = 0.12;      // λ
  double late_premium = 1.2;    // μ > 1
  double defer_factor = 0.8;    // f ∈ [0,1)

  double q(int i, int r) const { return loading[static_cast<size_t>(i) * m + r]; }

  bool operator==(const CbInstance&) const = default;
};

void Validate(const CbInstance& instance);

// Profit at ξ for x = (x_1..x_n, x0), y = (y_1..y_n, y0), evaluated directly.
double CbProfit(const CbInstance& instance, const BitVector& x,
                const BitVector& y, const std::vector<double>& xi);

// Maximize-sense spec: g = -λ x0 - λ μ y0 + Σ p̄_i (x_i + f y_i),
// h_r = Σ ½ Q_ir p̄_i (x_i + f y_i).
ProblemSpec MakeSpec(const CbInstance& instance);

// [-1, 1]^m.
UncertaintySet MakeUncertainty(const CbInstance& instance);

struct CbGeneratorOptions {
  int n = 4;
  int m = 2;
  std::uint64_t seed = 1;
};

// cost_i ~ U[0,10], p̄ = cost / 5, |Q_i| uniform on the unit simplex with
// independent random signs, B = Σ cost / 2, C1 = C2 = 0.2 B, λ = 0.12,
// μ = 1.2, f = 0.8.
CbInstance GenerateCb(const CbGeneratorOptions& options);

}  // namespace tworo::problems

#endif  // TWORO_PROBLEMS_CAPITAL_BUDGETING_H_
