#include "tworo/bench.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tworo/lp.h"

namespace tworo::bench {

double WorstCaseOverList(const std::vector<ObjectiveTerms>& list,
                         const UncertaintySet& u) {
  if (list.empty()) throw std::invalid_argument("WorstCaseOverList: empty list");
  auto argmin_at = [&list](const Scenario& c, double* value) {
    size_t best = 0;
    double best_value = Evaluate(list[0], c);
    for (size_t k = 1; k < list.size(); ++k) {
      const double v = Evaluate(list[k], c);
      if (v < best_value) {
        best = k;
        best_value = v;
      }
    }
    *value = best_value;
    return best;
  };

  double unused;
  std::vector<size_t> active{argmin_at(NominalScenario(u), &unused)};
  const Scenario center{u.c_bar()};
  for (size_t round = 0; round <= list.size(); ++round) {
    lp::LpProblem problem;
    const int mu = problem.AddVariable(-lp::kInf, lp::kInf, 1.0);
    const int offset = u.AddDeltaVariables(problem);
    for (size_t k : active) {
      std::vector<std::pair<int, double>> terms{{mu, 1.0}};
      for (int j = 0; j < u.p(); ++j) {
        double slope = 0.0;
        for (int r = 0; r < u.m(); ++r) slope += u.map_at(r, j) * list[k].h[r];
        if (slope != 0.0) terms.emplace_back(offset + j, -slope);
      }
      problem.AddRow(std::move(terms), lp::Relation::kLessEqual,
                     Evaluate(list[k], center));
    }
    const lp::LpResult r = lp::SolveLp(problem);
    if (r.status != lp::LpStatus::kOptimal) {
      throw std::runtime_error("WorstCaseOverList: LP " + lp::ToString(r.status));
    }
    const Scenario c = u.Map(std::vector<double>(r.x.begin() + offset,
                                                 r.x.begin() + offset + u.p()));
    double value;
    const size_t k = argmin_at(c, &value);
    if (value >= r.objective - 1e-9 * (1.0 + std::abs(r.objective))) return value;
    if (std::find(active.begin(), active.end(), k) != active.end()) {
      throw std::logic_error("WorstCaseOverList: active row still violated");
    }
    active.push_back(k);
  }
  throw std::logic_error("WorstCaseOverList: row generation did not converge");
}

double BruteForcePhi(const ProblemSpec& spec, const UncertaintySet& u,
                     const BitVector& x) {
  std::vector<ObjectiveTerms> list;
  spec.enumerate_second_stage(x, [&](const BitVector& y) {
    list.push_back(spec.objective(x, y));
  });
  if (list.empty()) throw std::invalid_argument("BruteForcePhi: Y(x) is empty");
  return WorstCaseOverList(list, u);
}

BruteForceResult BruteForceSolve(const ProblemSpec& spec,
                                 const UncertaintySet& u,
                                 const BruteForceOptions& options) {
  if (spec.sense != Sense::kMinimize) {
    throw std::invalid_argument("BruteForceSolve: spec must be canonical");
  }
  if (!spec.enumerate_first_stage || !spec.enumerate_second_stage) {
    throw std::invalid_argument("BruteForceSolve: " + spec.name +
                                " has no enumerators");
  }
  std::vector<BitVector> xs;
  long total = 0;
  spec.enumerate_first_stage([&](const BitVector& x) {
    xs.push_back(x);
    spec.enumerate_second_stage(x, [&](const BitVector&) {
      if (++total > options.max_solutions) {
        throw std::invalid_argument("BruteForceSolve: more than " +
                                    std::to_string(options.max_solutions) +
                                    " solutions");
      }
    });
  });
  BruteForceResult result;
  result.value = std::numeric_limits<double>::infinity();
  for (const BitVector& x : xs) {
    const double phi = BruteForcePhi(spec, u, x);
    result.phi.emplace_back(x, phi);
    if (phi < result.value) {
      result.value = phi;
      result.x = x;
    }
  }
  if (result.phi.empty()) throw std::runtime_error("BruteForceSolve: Z is empty");
  return result;
}

Scenario SampleBudgeted(const UncertaintySet& u, std::mt19937_64& rng,
                        long max_attempts) {
  if (u.kind() != UncertaintySet::Kind::kBudgeted) {
    throw std::invalid_argument("SampleBudgeted: set is not budgeted");
  }
  const int p = u.p();
  const double gamma = u.gamma();
  std::uniform_real_distribution<double> draw(0.0, gamma);
  std::vector<double> s(p), delta(p);
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    for (double& v : s) v = draw(rng);
    std::sort(s.begin(), s.end());
    bool accepted = true;
    for (int i = 0; i < p && accepted; ++i) {
      delta[i] = s[i] - (i == 0 ? 0.0 : s[i - 1]);
      accepted = delta[i] <= 1.0;
    }
    if (accepted) return u.Map(delta);
  }
  throw std::runtime_error("SampleBudgeted: no sample accepted after " +
                           std::to_string(max_attempts) + " attempts");
}

Scenario SampleScenario(const UncertaintySet& u, std::mt19937_64& rng,
                        long max_attempts) {
  if (u.kind() == UncertaintySet::Kind::kBudgeted) {
    return SampleBudgeted(u, rng, max_attempts);
  }
  const int p = u.p();
  for (int j = 0; j < p; ++j) {
    if (!std::isfinite(u.delta_lower()[j]) || !std::isfinite(u.delta_upper()[j])) {
      throw std::invalid_argument("SampleScenario: δ bounds must be finite");
    }
  }
  std::vector<double> delta(p);
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    for (int j = 0; j < p; ++j) {
      delta[j] = std::uniform_real_distribution<double>(
          u.delta_lower()[j], u.delta_upper()[j])(rng);
    }
    bool inside = true;
    for (const LinearRow& row : u.rows()) {
      double lhs = 0.0;
      for (int j = 0; j < p; ++j) lhs += row.coefficients[j] * delta[j];
      inside = inside && lhs <= row.rhs;
    }
    if (inside) return u.Map(delta);
  }
  throw std::runtime_error("SampleScenario: no sample accepted after " +
                           std::to_string(max_attempts) + " attempts");
}

double ExpectedBudgetSum(int p, double gamma) {
  if (p < 1 || !(gamma >= 0.0)) {
    throw std::invalid_argument("ExpectedBudgetSum: need p >= 1, gamma >= 0");
  }
  if (gamma == 0.0) return 0.0;
  if (gamma <= 1.0) return gamma * p / (p + 1.0);
  // The largest draw s has density p s^{p-1} / Γ^p; given s, the other p - 1
  // draws are uniform on [0, s] and all p increments are <= 1 with
  // probability Σ_k (-1)^k C(p,k) (1 - k/s)_+^{p-1}.
  auto accept = [p](long double s) {
    if (s <= 1.0L) return 1.0L;
    long double sum = 0.0L, binom = 1.0L;
    for (int k = 0; k <= p && k < s; ++k) {
      if (k > 0) binom *= static_cast<long double>(p - k + 1) / k;
      const long double term = binom * std::pow(1.0L - k / s, p - 1);
      sum += (k % 2 == 0) ? term : -term;
    }
    return std::clamp(sum, 0.0L, 1.0L);
  };
  auto density = [p, gamma](long double s) {
    return p * std::pow(s / gamma, p - 1) / gamma;
  };
  long double numerator = 0.0L, denominator = 0.0L;
  // Simpson on each unit interval; accept() has kinks at the integers.
  for (double a = 0.0; a < gamma; a += 1.0) {
    const double b = std::min(a + 1.0, gamma);
    constexpr int kSteps = 2000;
    const long double h = (b - a) / kSteps;
    for (int i = 0; i <= kSteps; ++i) {
      const long double s = a + i * h;
      const long double weight =
          (i == 0 || i == kSteps) ? 1.0L : (i % 2 == 1 ? 4.0L : 2.0L);
      const long double f = accept(s) * density(s);
      numerator += weight * h / 3.0L * s * f;
      denominator += weight * h / 3.0L * f;
    }
  }
  if (!(denominator > 0.0L)) {
    throw std::runtime_error("ExpectedBudgetSum: acceptance probability is 0");
  }
  return static_cast<double>(numerator / denominator);
}

Scenario DeterministicScenario(const UncertaintySet& u) {
  if (u.kind() == UncertaintySet::Kind::kBudgeted) return Scenario{u.c_bar()};
  return NominalScenario(u);
}

AdaptivityGap ComputeAdaptivityGap(const ProblemSpec& spec,
                                   const UncertaintySet& u,
                                   const Oracle& oracle,
                                   double two_stage_canonical) {
  const Scenario c = DeterministicScenario(u);
  const std::optional<Decision> d = oracle.Solve(c, FixationSet(spec.n1));
  if (!d) throw std::runtime_error("ComputeAdaptivityGap: problem infeasible");
  const double deterministic = Evaluate(spec.MakeSolution(d->x, d->y), c);
  AdaptivityGap gap;
  gap.deterministic_value = spec.ReportedValue(deterministic);
  if (deterministic != 0.0) {
    gap.percent =
        100.0 * (two_stage_canonical - deterministic) / std::abs(deterministic);
  }
  return gap;
}

PolicyGapResult PolicyGap(const std::vector<Solution>& pool, const BitVector& x,
                          const ProblemSpec& spec, const Oracle& oracle,
                          const std::vector<Scenario>& scenarios) {
  if (pool.empty()) throw std::invalid_argument("PolicyGap: empty pool");
  for (const Solution& z : pool) {
    if (z.x != x) {
      throw std::invalid_argument("PolicyGap: pool member with another first stage");
    }
  }
  const FixationSet fix = FixationSet::FromFirstStage(x);
  PolicyGapResult result;
  for (size_t l = 0; l < scenarios.size(); ++l) {
    const Scenario& c = scenarios[l];
    double pool_best = std::numeric_limits<double>::infinity();
    for (const Solution& z : pool) pool_best = std::min(pool_best, Evaluate(z, c));
    const std::optional<Decision> d = oracle.Solve(c, fix);
    if (!d) throw std::runtime_error("PolicyGap: Y(x) is empty");
    const double optimum = Evaluate(spec.MakeSolution(d->x, d->y), c);
    const double denominator = spec.ReportedValue(pool_best);
    if (!(denominator > 0.0)) {
      ++result.skipped;
      result.warnings.push_back("scenario " + std::to_string(l) +
                                ": best pool value " + std::to_string(denominator) +
                                " is not positive; skipped");
      continue;
    }
    result.per_scenario.push_back(100.0 * (pool_best - optimum) / denominator);
  }
  if (!result.per_scenario.empty()) {
    double sum = 0.0;
    for (double v : result.per_scenario) sum += v;
    result.average = sum / result.per_scenario.size();
  }
  return result;
}

}  // namespace tworo::bench
