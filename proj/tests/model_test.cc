#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.h"
#include "tworo/model.h"
#include "tworo/problems/capital_budgeting.h"
#include "tworo/problems/explicit.h"

namespace tworo {
namespace {

using testing::T1Solution;

TEST(Evaluate, ToyValues) {
  EXPECT_DOUBLE_EQ(Evaluate(T1Solution(1, 1), Scenario{{1.0}}), 1.5);
  EXPECT_DOUBLE_EQ(Evaluate(T1Solution(0, 0), Scenario{{0.37}}), 2.0);
  EXPECT_DOUBLE_EQ(Evaluate(T1Solution(0, 1), Scenario{{0.0}}), 0.0);
}

TEST(Evaluate, ZeroScenarioGivesConstantTerm) {
  const Solution z{{1}, {0}, 4.25, {1.0, -2.0, 3.0}};
  EXPECT_DOUBLE_EQ(Evaluate(z, Scenario{{0.0, 0.0, 0.0}}), 4.25);
}

TEST(Evaluate, DimensionMismatchThrows) {
  EXPECT_THROW(Evaluate(T1Solution(1, 1), Scenario{{1.0, 2.0}}),
               std::invalid_argument);
}

TEST(Evaluate, LinearInScenario) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> draw(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    Solution z{{}, {}, draw(rng), {draw(rng), draw(rng), draw(rng)}};
    Scenario a{{draw(rng), draw(rng), draw(rng)}};
    Scenario b{{draw(rng), draw(rng), draw(rng)}};
    const double alpha = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Scenario mix{{0, 0, 0}};
    for (int r = 0; r < 3; ++r) {
      mix.values[r] = alpha * a.values[r] + (1 - alpha) * b.values[r];
    }
    EXPECT_NEAR(Evaluate(z, mix),
                alpha * Evaluate(z, a) + (1 - alpha) * Evaluate(z, b), 1e-9);
  }
}

TEST(MakeSolution, RejectsInfeasible) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  EXPECT_THROW(spec.MakeSolution({1}, {1, 0}), std::invalid_argument);
}

TEST(Canonicalize, NegatesMaximizeProblems) {
  problems::CbInstance cb = problems::GenerateCb({3, 2, 5});
  const ProblemSpec stated = problems::MakeSpec(cb);
  const ProblemSpec canonical = Canonicalize(stated);
  EXPECT_EQ(canonical.sense, Sense::kMinimize);
  EXPECT_TRUE(canonical.negated);
  // Cheapest project now, nothing deferred: within budget by construction.
  const int cheapest = static_cast<int>(
      std::min_element(cb.cost.begin(), cb.cost.end()) - cb.cost.begin());
  BitVector x(4, 0), y(4, 0);
  x[cheapest] = 1;
  const Scenario xi{{0.3, -0.8}};
  const double profit = Evaluate(stated.MakeSolution(x, y), xi);
  EXPECT_DOUBLE_EQ(Evaluate(canonical.MakeSolution(x, y), xi), -profit);
  EXPECT_DOUBLE_EQ(canonical.ReportedValue(-profit), profit);
}

TEST(Canonicalize, IdentityOnMinimizeAndIdempotent) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  const ProblemSpec once = Canonicalize(spec);
  EXPECT_FALSE(once.negated);
  const problems::CbInstance instance = problems::GenerateCb({2, 1, 3});
  const ProblemSpec cb = Canonicalize(problems::MakeSpec(instance));
  const ProblemSpec twice = Canonicalize(cb);
  EXPECT_TRUE(twice.negated);
  BitVector x(3, 0), y(3, 0);
  x[instance.cost[0] <= instance.cost[1] ? 0 : 1] = 1;
  EXPECT_DOUBLE_EQ(Evaluate(cb.MakeSolution(x, y), Scenario{{0.5}}),
                   Evaluate(twice.MakeSolution(x, y), Scenario{{0.5}}));
}

TEST(FixationSet, TracksIndexSets) {
  FixationSet fix(4);
  fix.Set(1, Fix::kOne);
  fix.Set(3, Fix::kZero);
  EXPECT_EQ(fix.I1(), std::vector<int>{1});
  EXPECT_EQ(fix.I0(), std::vector<int>{3});
  EXPECT_EQ(fix.FreeIndices(), (std::vector<int>{0, 2}));
  EXPECT_TRUE(fix.Admits({0, 1, 1, 0}));
  EXPECT_FALSE(fix.Admits({0, 0, 1, 0}));
  EXPECT_THROW(fix.Set(1, Fix::kZero), std::invalid_argument);
  EXPECT_TRUE(FixationSet::FromFirstStage({1, 0}).AllFixed());
}

TEST(UncertaintySet, RejectsEmptyOrUnbounded) {
  EXPECT_THROW(UncertaintySet::Box({1.0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(UncertaintySet::Budgeted({0.0}, {1.0}, -1.0), std::invalid_argument);
  // δ >= 0 with no upper bound and no rows.
  EXPECT_THROW(UncertaintySet({0.0}, {1.0}, 1, {0.0}, {lp::kInf}, {}),
               std::invalid_argument);
  // Infeasible row.
  EXPECT_THROW(UncertaintySet({0.0}, {1.0}, 1, {0.0}, {1.0}, {{{1.0}, -1.0}}),
               std::invalid_argument);
}

TEST(UncertaintySet, GeneralRowsBoundAnOpenBox) {
  // δ >= 0 with Σδ <= 2 is bounded through the row.
  const UncertaintySet u({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}, 2, {0.0, 0.0},
                         {lp::kInf, lp::kInf}, {{{1.0, 1.0}, 2.0}});
  EXPECT_TRUE(u.Contains(Scenario{{1.0, 1.0}}));
  EXPECT_FALSE(u.Contains(Scenario{{1.5, 1.0}}));
}

TEST(NominalScenario, Examples) {
  EXPECT_EQ(NominalScenario(UncertaintySet::Budgeted({2.0, 3.0}, {1.0, 1.0}, 0.0)),
            (Scenario{{2.0, 3.0}}));
  EXPECT_EQ(NominalScenario(UncertaintySet::Box({-1.0, -1.0}, {1.0, 1.0})),
            (Scenario{{0.0, 0.0}}));
  const Scenario c =
      NominalScenario(UncertaintySet::Budgeted({2.0, 3.0}, {1.0, 1.0}, 1.0));
  EXPECT_NEAR(c.values[0], 2.5, 1e-12);
  EXPECT_NEAR(c.values[1], 3.5, 1e-12);
  // Midpoint (0.5, 0.5, 0.5) has Σ = 1.5 > Γ = 1, so it scales by 2/3.
  const Scenario scaled =
      NominalScenario(UncertaintySet::Budgeted({0, 0, 0}, {3.0, 3.0, 3.0}, 1.0));
  for (double v : scaled.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(UncertaintySet, ContainsBudgetedPoints) {
  const UncertaintySet u = UncertaintySet::Budgeted({1.0, 1.0}, {2.0, 4.0}, 1.0);
  EXPECT_TRUE(u.Contains(Scenario{{2.0, 3.0}}));
  EXPECT_FALSE(u.Contains(Scenario{{3.0, 3.0}}));
  EXPECT_FALSE(u.Contains(Scenario{{0.5, 1.0}}));
}

}  // namespace
}  // namespace tworo
