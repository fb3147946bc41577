#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.h"
#include "tworo/bench.h"
#include "tworo/linear_encoding.h"
#include "tworo/problems/explicit.h"

namespace tworo::bench {
namespace {

using testing::T1Solution;
using testing::WorstCaseOnInterval;

TEST(BruteForce, Toy) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  const BruteForceResult r = BruteForceSolve(spec, problems::ToyT1Uncertainty());
  EXPECT_NEAR(r.value, 1.5, 1e-9);
  EXPECT_EQ(r.x, BitVector{1});
  ASSERT_EQ(r.phi.size(), 2u);
  EXPECT_NEAR(r.phi[0].second, 2.0, 1e-9);
}

TEST(BruteForce, SingletonSetIsDeterministic) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  const BruteForceResult r =
      BruteForceSolve(spec, UncertaintySet::Budgeted({0.3}, {5.0}, 0.0));
  // min over Z at c = 0.3.
  EXPECT_NEAR(r.value, std::min({2.0, 0.9, 1.5, 0.8}), 1e-9);
}

TEST(BruteForce, InvariantUnderEntryOrder) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    problems::ExplicitInstance in = problems::RandomExplicit(3, 2, 2, 3, rng);
    const UncertaintySet u = UncertaintySet::Budgeted({0.5, 1.0}, {2.0, 1.0}, 1.0);
    const double before = BruteForceSolve(problems::MakeSpec(in), u).value;
    std::shuffle(in.entries.begin(), in.entries.end(), rng);
    EXPECT_NEAR(BruteForceSolve(problems::MakeSpec(in), u).value, before, 1e-9);
  }
}

TEST(BruteForce, RefusesAboveTheCap) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  BruteForceOptions options;
  options.max_solutions = 3;
  EXPECT_THROW(BruteForceSolve(spec, problems::ToyT1Uncertainty(), options),
               std::invalid_argument);
}

TEST(WorstCaseOverList, MatchesScalarOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> draw(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ObjectiveTerms> list;
    std::vector<std::pair<double, double>> lines;
    for (int k = 0; k < 1 + trial % 8; ++k) {
      list.push_back({draw(rng), {draw(rng)}});
      lines.emplace_back(list.back().g, list.back().h[0]);
    }
    const double lo = draw(rng);
    EXPECT_NEAR(WorstCaseOverList(list, UncertaintySet::Box({lo}, {lo + 1.5})),
                WorstCaseOnInterval(lines, lo, lo + 1.5), 1e-7);
  }
  EXPECT_THROW(WorstCaseOverList({}, UncertaintySet::Box({0.0}, {1.0})),
               std::invalid_argument);
}

TEST(Sampler, ZeroBudgetReturnsNominal) {
  const UncertaintySet u = UncertaintySet::Budgeted({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}, 0.0);
  std::mt19937_64 rng(1);
  EXPECT_EQ(SampleBudgeted(u, rng), (Scenario{{1.0, 2.0, 3.0}}));
}

TEST(Sampler, FullBudgetSamplesStayInside) {
  const int p = 4;
  const UncertaintySet u = UncertaintySet::Budgeted(std::vector<double>(p, 1.0),
                                                    std::vector<double>(p, 2.0), p);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) EXPECT_TRUE(u.Contains(SampleBudgeted(u, rng)));
}

TEST(Sampler, RejectsNonBudgetedSets) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(SampleBudgeted(UncertaintySet::Box({0.0}, {1.0}), rng),
               std::invalid_argument);
  // Box sets go through the generic sampler.
  const Scenario c = SampleScenario(UncertaintySet::Box({0.0}, {1.0}), rng);
  EXPECT_GE(c.values[0], 0.0);
  EXPECT_LE(c.values[0], 1.0);
}

TEST(Sampler, PathologicalBudgetHitsTheAttemptCap) {
  // p = 200 increments summing to Γ = 199.5 almost never all stay <= 1.
  const UncertaintySet u = UncertaintySet::Budgeted(
      std::vector<double>(200, 0.0), std::vector<double>(200, 1.0), 199.5);
  std::mt19937_64 rng(4);
  EXPECT_THROW(SampleBudgeted(u, rng, 1000), std::runtime_error);
}

TEST(ExpectedBudgetSum, SmallBudgetClosedForm) {
  EXPECT_DOUBLE_EQ(ExpectedBudgetSum(4, 0.0), 0.0);
  EXPECT_NEAR(ExpectedBudgetSum(4, 1.0), 0.8, 1e-12);
  EXPECT_NEAR(ExpectedBudgetSum(9, 0.5), 0.45, 1e-12);
}

// E[max] for p = 2 conditioned on both increments <= 1, by a midpoint grid
// over the ordered pair.
double TwoDrawReference(double gamma) {
  const int steps = 2000;
  const double h = gamma / steps;
  double mass = 0.0, moment = 0.0;
  for (int a = 0; a < steps; ++a) {
    const double lo = (a + 0.5) * h;
    if (lo > 1.0) break;
    for (int b = a; b < steps; ++b) {
      const double hi = (b + 0.5) * h;
      if (hi - lo > 1.0) break;
      const double weight = a == b ? 0.5 : 1.0;
      mass += weight;
      moment += weight * hi;
    }
  }
  return moment / mass;
}

TEST(ExpectedBudgetSum, QuadratureMatchesIndependentGrid) {
  for (double gamma : {1.3, 1.7, 2.0}) {
    EXPECT_NEAR(ExpectedBudgetSum(2, gamma), TwoDrawReference(gamma), 2e-3) << gamma;
  }
}

TEST(ExpectedBudgetSum, MatchesSimulationAboveOne) {
  const int p = 5;
  const double gamma = 2.5;
  const UncertaintySet u = UncertaintySet::Budgeted(
      std::vector<double>(p, 0.0), std::vector<double>(p, 1.0), gamma);
  std::mt19937_64 rng(10);
  const int draws = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const Scenario c = SampleBudgeted(u, rng);
    double total = 0.0;
    for (double v : c.values) total += v;
    sum += total;
    sum_sq += total * total;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_NEAR(mean, ExpectedBudgetSum(p, gamma), 3.0 * se);
}

TEST(PolicyGap, ToyExamples) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  EnumerationOracle oracle(spec);
  const PolicyGapResult suboptimal =
      PolicyGap({T1Solution(1, 0)}, {1}, spec, oracle, {Scenario{{0.0}}});
  ASSERT_EQ(suboptimal.per_scenario.size(), 1u);
  EXPECT_NEAR(suboptimal.per_scenario[0], 100.0 * (1.5 - 0.5) / 1.5, 1e-9);
  const PolicyGapResult covered = PolicyGap({T1Solution(1, 0), T1Solution(1, 1)}, {1},
                                            spec, oracle,
                                            {Scenario{{0.0}}, Scenario{{1.0}}});
  EXPECT_EQ(covered.per_scenario, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(*covered.average, 0.0);
  EXPECT_THROW(PolicyGap({T1Solution(0, 0)}, {1}, spec, oracle, {Scenario{{0.0}}}),
               std::invalid_argument);
}

TEST(PolicyGap, NonPositiveDenominatorIsSkipped) {
  problems::ExplicitInstance in;
  in.n1 = in.n2 = in.m = 1;
  in.entries = {{{0}, {0}, 0.0, {0.0}}, {{0}, {1}, -1.0, {0.0}}};
  const ProblemSpec spec = problems::MakeSpec(in);
  EnumerationOracle oracle(spec);
  const PolicyGapResult r = PolicyGap({spec.MakeSolution({0}, {0})}, {0}, spec, oracle,
                                      {Scenario{{0.5}}});
  EXPECT_EQ(r.skipped, 1);
  EXPECT_TRUE(r.per_scenario.empty());
  EXPECT_FALSE(r.average);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(AdaptivityGap, ToyAndSingleton) {
  const ProblemSpec spec = problems::MakeSpec(problems::ToyT1());
  EnumerationOracle oracle(spec);
  const AdaptivityGap toy =
      ComputeAdaptivityGap(spec, problems::ToyT1Uncertainty(), oracle, 1.5);
  EXPECT_NEAR(toy.deterministic_value, 1.0, 1e-12);
  EXPECT_NEAR(*toy.percent, 50.0, 1e-9);
  const UncertaintySet point = UncertaintySet::Budgeted({0.3}, {2.0}, 0.0);
  const double two_stage = BruteForceSolve(spec, point).value;
  EXPECT_NEAR(*ComputeAdaptivityGap(spec, point, oracle, two_stage).percent, 0.0, 1e-9);
}

TEST(AdaptivityGap, ZeroDeterministicValueIsNotApplicable) {
  problems::ExplicitInstance in;
  in.n1 = in.n2 = in.m = 1;
  in.entries = {{{0}, {0}, 0.0, {1.0}}};
  const ProblemSpec spec = problems::MakeSpec(in);
  EnumerationOracle oracle(spec);
  EXPECT_FALSE(ComputeAdaptivityGap(spec, UncertaintySet::Budgeted({0.0}, {1.0}, 1.0),
                                    oracle, 1.0)
                   .percent);
}

TEST(DeterministicScenario, UsesNominalWeights) {
  EXPECT_EQ(DeterministicScenario(UncertaintySet::Budgeted({1.0, 2.0}, {3.0, 3.0}, 1.0)),
            (Scenario{{1.0, 2.0}}));
  EXPECT_EQ(DeterministicScenario(UncertaintySet::Box({0.0}, {1.0})), (Scenario{{0.5}}));
}

}  // namespace
}  // namespace tworo::bench
