#ifndef TWORO_BENCH_H_
#define TWORO_BENCH_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tworo/model.h"

namespace tworo::bench {

// max_{c∈U} min_k g_k + c·h_k over an explicit list, by row generation on
// its own (μ, δ) LP. Throws std::invalid_argument on an empty list.
double WorstCaseOverList(const std::vector<ObjectiveTerms>& list,
                         const UncertaintySet& u);

struct BruteForceOptions {
  // Refuse instances whose enumerated |Z| exceeds this.
  long max_solutions = 1L << 21;
};

struct BruteForceResult {
  // Canonical sense.
  double value = 0.0;
  BitVector x;
  // Φ(x) for every x ∈ X in enumeration order, canonical sense.
  std::vector<std::pair<BitVector, double>> phi;
};

// Φ(x) by enumerating Y(x). spec must be canonical.
double BruteForcePhi(const ProblemSpec& spec, const UncertaintySet& u,
                     const BitVector& x);

// Exact optimum by enumerating X and Y(x). spec must be canonical and carry
// enumerators. Throws std::invalid_argument above the size cap and
// std::runtime_error if Z is empty.
BruteForceResult BruteForceSolve(const ProblemSpec& spec,
                                 const UncertaintySet& u,
                                 const BruteForceOptions& options = {});

// Draws p sorted uniforms on [0, Γ] and uses their increments as δ, redrawing
// while some increment exceeds 1. Throws std::invalid_argument for
// non-budgeted sets and std::runtime_error after max_attempts rejections.
Scenario SampleBudgeted(const UncertaintySet& u, std::mt19937_64& rng,
                        long max_attempts = 1'000'000);

// Budgeted sets use SampleBudgeted; otherwise δ uniform on its box,
// rejecting points that violate the rows.
Scenario SampleScenario(const UncertaintySet& u, std::mt19937_64& rng,
                        long max_attempts = 1'000'000);

// E[Σδ] under SampleBudgeted. Equals Γ p / (p + 1) for Γ <= 1; otherwise the
// rejection step shifts it and the value is computed by quadrature.
double ExpectedBudgetSum(int p, double gamma);

// Scenario used for the deterministic problem: c_bar for budgeted sets (no
// deviation), the nominal scenario otherwise.
Scenario DeterministicScenario(const UncertaintySet& u);

struct AdaptivityGap {
  // Stated sense.
  double deterministic_value = 0.0;
  // 100 (two-stage - deterministic) / |deterministic| in canonical terms;
  // nullopt when the deterministic value is 0.
  std::optional<double> percent;
};

AdaptivityGap ComputeAdaptivityGap(const ProblemSpec& spec,
                                   const UncertaintySet& u,
                                   const Oracle& oracle,
                                   double two_stage_canonical);

struct PolicyGapResult {
  // Δ_l in percent for scenarios with a usable denominator.
  std::vector<double> per_scenario;
  // Mean of per_scenario; nullopt if every scenario was skipped.
  std::optional<double> average;
  int skipped = 0;
  std::vector<std::string> warnings;
};

// Δ_l = (best pool value - optimum over Y(x)) / best pool value for each
// scenario, in the stated sense. pool members must have first stage x and
// carry canonical (g, h).
PolicyGapResult PolicyGap(const std::vector<Solution>& pool, const BitVector& x,
                          const ProblemSpec& spec, const Oracle& oracle,
                          const std::vector<Scenario>& scenarios);

struct MetricsReport {
  std::optional<double> adaptivity_gap;
  std::optional<double> root_gap;
  std::optional<double> policy_gap;
  std::vector<double> per_scenario;
  int skipped_scenarios = 0;
  std::uint64_t seed = 0;

  bool operator==(const MetricsReport&) const = default;
};

}  // namespace tworo::bench

#endif  // TWORO_BENCH_H_
