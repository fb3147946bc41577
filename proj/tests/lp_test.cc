#include <gtest/gtest.h>

#include <random>

#include "tworo/lp.h"

namespace tworo::lp {
namespace {

TEST(SolveLp, TwoConstraintMaster) {
  // max μ s.t. μ <= 2, μ <= 3c, 0 <= c <= 1.
  LpProblem p;
  const int mu = p.AddVariable(-kInf, kInf, 1.0);
  const int c = p.AddVariable(0.0, 1.0);
  p.AddRow({{mu, 1.0}}, Relation::kLessEqual, 2.0);
  p.AddRow({{mu, 1.0}, {c, -3.0}}, Relation::kLessEqual, 0.0);
  const LpResult r = SolveLp(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-9);
  EXPECT_GE(r.x[c], 2.0 / 3.0 - 1e-9);
}

TEST(SolveLp, Infeasible) {
  LpProblem p;
  const int x = p.AddVariable(0.0, kInf);
  p.AddRow({{x, 1.0}}, Relation::kLessEqual, -1.0);
  EXPECT_EQ(SolveLp(p).status, LpStatus::kInfeasible);
}

TEST(SolveLp, Unbounded) {
  LpProblem p;
  p.AddVariable(0.0, kInf, 1.0);
  EXPECT_EQ(SolveLp(p).status, LpStatus::kUnbounded);
}

TEST(SolveLp, EqualityAndFreeVariables) {
  // max x + y s.t. x + 2y = 4, x - y >= -2, x <= 3, y free.
  LpProblem p;
  const int x = p.AddVariable(-kInf, 3.0, 1.0);
  const int y = p.AddVariable(-kInf, kInf, 1.0);
  p.AddRow({{x, 1.0}, {y, 2.0}}, Relation::kEqual, 4.0);
  p.AddRow({{x, 1.0}, {y, -1.0}}, Relation::kGreaterEqual, -2.0);
  const LpResult r = SolveLp(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[x], 3.0, 1e-9);
  EXPECT_NEAR(r.x[y], 0.5, 1e-9);
  EXPECT_NEAR(r.objective, 3.5, 1e-9);
}

TEST(Validate, RejectsMalformed) {
  LpProblem p;
  p.AddVariable(1.0, 0.0);
  EXPECT_THROW(Validate(p), std::invalid_argument);
}

// Random feasible bounded LPs: the returned primal is feasible, duals close
// the gap, and a second solve is bit-identical.
TEST(SolveLp, RandomStrongDualityAndDeterminism) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_int_distribution<int> rel(0, 2);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 6, m = 1 + trial % 5;
    LpProblem p;
    for (int j = 0; j < n; ++j) {
      const bool free_var = trial % 7 == 0 && j == 0;
      p.AddVariable(free_var ? -10.0 : 0.0, 1.0 + (j % 3), coef(rng));
    }
    // Rows through a known interior-ish point keep the problem feasible.
    std::vector<double> point(n);
    for (int j = 0; j < n; ++j) point[j] = 0.5 * p.upper[j];
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> terms;
      double at_point = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = coef(rng);
        terms.emplace_back(j, a);
        at_point += a * point[j];
      }
      const int kind = rel(rng);
      if (kind == 0) p.AddRow(terms, Relation::kLessEqual, at_point + 1.0);
      if (kind == 1) p.AddRow(terms, Relation::kGreaterEqual, at_point - 1.0);
      if (kind == 2) p.AddRow(terms, Relation::kEqual, at_point);
    }
    const LpResult r = SolveLp(p);
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_LE(PrimalInfeasibility(p, r.x), 1e-7);
    double primal = 0.0;
    for (int j = 0; j < n; ++j) primal += p.objective[j] * r.x[j];
    EXPECT_NEAR(primal, r.objective, 1e-9);
    const double dual = DualObjective(p, r.duals);
    EXPECT_LE(r.objective, dual + 1e-6);
    EXPECT_NEAR(r.objective, dual, 1e-6);
    const LpResult again = SolveLp(p);
    EXPECT_EQ(again.x, r.x);
    ++solved;
  }
  EXPECT_EQ(solved, 300);
}

TEST(SolveLp, DegenerateProblemTerminates) {
  // Many redundant rows through the optimum.
  LpProblem p;
  const int x = p.AddVariable(0.0, kInf, 1.0);
  const int y = p.AddVariable(0.0, kInf, 1.0);
  for (int k = 1; k <= 40; ++k) {
    p.AddRow({{x, static_cast<double>(k)}, {y, 1.0}}, Relation::kLessEqual, k);
    p.AddRow({{x, 1.0}, {y, static_cast<double>(k)}}, Relation::kLessEqual, k);
  }
  const LpResult r = SolveLp(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-9);
}

}  // namespace
}  // namespace tworo::lp
