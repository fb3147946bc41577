#include "tworo/linear_encoding.h"

#include <cmath>
#include <stdexcept>

namespace tworo {

void LinearExpr::Add(const LinearExpr& other, double scale) {
  for (const auto& [var, coef] : other.terms) Add(var, scale * coef);
  constant += scale * other.constant;
}

int ModelBuilder::AddBinary(double cost) {
  const int var = problem_.lp.AddVariable(0.0, 1.0, cost);
  problem_.binaries.push_back(var);
  return var;
}

int ModelBuilder::AddContinuous(double lb, double ub, double cost) {
  return problem_.lp.AddVariable(lb, ub, cost);
}

void ModelBuilder::Fix(int var, double value) {
  problem_.lp.lower[var] = value;
  problem_.lp.upper[var] = value;
}

void ModelBuilder::AddRow(const LinearExpr& lhs, lp::Relation relation,
                          double rhs) {
  problem_.lp.AddRow(lhs.terms, relation, rhs - lhs.constant);
}

void ModelBuilder::AddToObjective(const LinearExpr& expr, double scale) {
  for (const auto& [var, coef] : expr.terms) {
    problem_.lp.objective[var] += scale * coef;
  }
}

void NegatedEncoding::AddFirstStageRows(ModelBuilder& builder,
                                        std::span<const int> x_vars) const {
  inner_->AddFirstStageRows(builder, x_vars);
}

ScenarioBlock NegatedEncoding::AddScenarioBlock(ModelBuilder& builder,
                                                std::span<const int> x_vars,
                                                const Scenario& c) const {
  ScenarioBlock block = inner_->AddScenarioBlock(builder, x_vars, c);
  for (auto& term : block.objective.terms) term.second = -term.second;
  block.objective.constant = -block.objective.constant;
  return block;
}

// ---------------------------------------------------------------------------

EncodingOracle::EncodingOracle(ProblemSpec spec, mip::MipLimits limits)
    : spec_(std::move(spec)), limits_(limits) {
  if (spec_.sense != Sense::kMinimize) {
    throw std::invalid_argument("EncodingOracle: spec must be canonical");
  }
  if (!spec_.encoding) {
    throw std::invalid_argument("EncodingOracle: " + spec_.name +
                                " has no linear encoding");
  }
}

std::optional<Decision> EncodingOracle::Solve(const Scenario& c,
                                              const FixationSet& fix) const {
  ModelBuilder builder;
  std::vector<int> x_vars(spec_.n1);
  for (int i = 0; i < spec_.n1; ++i) {
    x_vars[i] = builder.AddBinary();
    if (!fix.is_free(i)) {
      builder.Fix(x_vars[i], fix.at(i) == Fix::kOne ? 1.0 : 0.0);
    }
  }
  spec_.encoding->AddFirstStageRows(builder, x_vars);
  const ScenarioBlock block =
      spec_.encoding->AddScenarioBlock(builder, x_vars, c);
  builder.AddToObjective(block.objective, -1.0);
  const mip::MipResult result = mip::SolveMip(builder.problem(), limits_);
  switch (result.status) {
    case mip::MipStatus::kInfeasible:
      return std::nullopt;
    case mip::MipStatus::kOptimal:
      break;
    default:
      throw OracleError("EncodingOracle(" + spec_.name +
                        "): MIP ended with status " +
                        mip::ToString(result.status));
  }
  Decision d;
  d.x.resize(spec_.n1);
  for (int i = 0; i < spec_.n1; ++i) {
    d.x[i] = std::lround(result.x[x_vars[i]]) != 0;
  }
  d.y.resize(block.y_vars.size());
  for (size_t k = 0; k < block.y_vars.size(); ++k) {
    d.y[k] = std::lround(result.x[block.y_vars[k]]) != 0;
  }
  return d;
}

// ---------------------------------------------------------------------------

EnumerationOracle::EnumerationOracle(ProblemSpec spec) : spec_(std::move(spec)) {
  if (!spec_.enumerate_first_stage || !spec_.enumerate_second_stage) {
    throw std::invalid_argument("EnumerationOracle: " + spec_.name +
                                " has no enumerators");
  }
}

std::optional<Decision> EnumerationOracle::Solve(const Scenario& c,
                                                 const FixationSet& fix) const {
  std::optional<Decision> best;
  double best_value = 0.0;
  spec_.enumerate_first_stage([&](const BitVector& x) {
    if (!fix.Admits(x)) return;
    spec_.enumerate_second_stage(x, [&](const BitVector& y) {
      const double value = Evaluate(spec_.objective(x, y), c);
      if (!best || value < best_value) {
        best = Decision{x, y};
        best_value = value;
      }
    });
  });
  return best;
}

}  // namespace tworo
