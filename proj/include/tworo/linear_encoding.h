#ifndef TWORO_LINEAR_ENCODING_H_
#define TWORO_LINEAR_ENCODING_H_

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tworo/mip.h"
#include "tworo/model.h"

namespace tworo {

struct LinearExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  void Add(int var, double coefficient) {
    if (coefficient != 0.0) terms.emplace_back(var, coefficient);
  }
  void Add(const LinearExpr& other, double scale = 1.0);
};

// Incrementally assembles a MipProblem (maximize sense).
class ModelBuilder {
 public:
  int AddBinary(double cost = 0.0);
  int AddContinuous(double lb, double ub, double cost = 0.0);
  void Fix(int var, double value);
  // lhs (relation) rhs; the constant of lhs moves to the right-hand side.
  void AddRow(const LinearExpr& lhs, lp::Relation relation, double rhs);
  void AddToObjective(const LinearExpr& expr, double scale = 1.0);

  int num_rows() const { return problem_.lp.num_rows(); }
  int num_variables() const { return problem_.lp.num_variables(); }
  const mip::MipProblem& problem() const { return problem_; }
  mip::MipProblem Release() { return std::move(problem_); }

 private:
  mip::MipProblem problem_;
};

// One copy of the second-stage variables for a fixed scenario.
struct ScenarioBlock {
  // f(x, y, c) in terms of the model variables.
  LinearExpr objective;
  // Model variables holding y, in the order of Solution::y.
  std::vector<int> y_vars;
};

// Linear description of Z used by CCG masters and MIP oracles. The objective
// of a block is expressed in the problem's own sense.
class LinearEncoding {
 public:
  virtual ~LinearEncoding() = default;
  // Constraints defining X on the first-stage variables.
  virtual void AddFirstStageRows(ModelBuilder& builder,
                                 std::span<const int> x_vars) const = 0;
  // Adds y variables and the rows (x, y) ∈ Z for scenario c. Scenario data
  // may enter constraints as well as the objective.
  virtual ScenarioBlock AddScenarioBlock(ModelBuilder& builder,
                                         std::span<const int> x_vars,
                                         const Scenario& c) const = 0;
};

// Flips the sign of every block objective.
class NegatedEncoding : public LinearEncoding {
 public:
  explicit NegatedEncoding(std::shared_ptr<const LinearEncoding> inner)
      : inner_(std::move(inner)) {}

  void AddFirstStageRows(ModelBuilder& builder,
                         std::span<const int> x_vars) const override;
  ScenarioBlock AddScenarioBlock(ModelBuilder& builder,
                                 std::span<const int> x_vars,
                                 const Scenario& c) const override;

 private:
  std::shared_ptr<const LinearEncoding> inner_;
};

// Oracle that solves min f(·, c) as a MIP built from the spec's encoding.
class EncodingOracle : public Oracle {
 public:
  // spec must be canonical and carry an encoding.
  explicit EncodingOracle(ProblemSpec spec, mip::MipLimits limits = {});

  std::optional<Decision> Solve(const Scenario& c,
                                const FixationSet& fix) const override;

 private:
  ProblemSpec spec_;
  mip::MipLimits limits_;
};

// Oracle that enumerates X and Y(x) through the spec's enumerators. Ties
// resolve to the first enumerated minimizer.
class EnumerationOracle : public Oracle {
 public:
  explicit EnumerationOracle(ProblemSpec spec);

  std::optional<Decision> Solve(const Scenario& c,
                                const FixationSet& fix) const override;

 private:
  ProblemSpec spec_;
};

}  // namespace tworo

#endif  // TWORO_LINEAR_ENCODING_H_
