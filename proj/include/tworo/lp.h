#ifndef TWORO_LP_H_
#define TWORO_LP_H_

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tworo::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<std::pair<int, double>> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// max objective·x  s.t.  rows,  lower <= x <= upper.
struct LpProblem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_variables() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  // Appends a variable and returns its index.
  int AddVariable(double lb, double ub, double cost = 0.0);
  void AddRow(std::vector<std::pair<int, double>> terms, Relation relation,
              double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kStalled };

std::string ToString(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kStalled;
  std::vector<double> x;
  double objective = 0.0;
  // Row duals y and structural reduced costs objective - A^T y.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  int iterations = 0;
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // 0 selects a size-dependent default.
  int iteration_limit = 0;
};

// Throws std::invalid_argument on malformed input (dimension mismatch,
// NaN coefficients, crossed bounds).
void Validate(const LpProblem& problem);

LpResult SolveLp(const LpProblem& problem, const SimplexOptions& options = {});

// Same problem with variable bounds replaced; used by branch and bound.
LpResult SolveLp(const LpProblem& problem, const std::vector<double>& lower,
                 const std::vector<double>& upper,
                 const SimplexOptions& options = {});

namespace detail {
class DenseSimplex;
}  // namespace detail

// One LP re-solved under changing variable bounds, as in branch and bound.
// After an optimal solve the basis is kept and the next bounds are handled by
// the dual simplex; a failed warm solve falls back to a cold one.
class WarmStartLp {
 public:
  explicit WarmStartLp(LpProblem problem, SimplexOptions options = {});
  ~WarmStartLp();
  WarmStartLp(const WarmStartLp&) = delete;
  WarmStartLp& operator=(const WarmStartLp&) = delete;

  LpResult Solve(const std::vector<double>& lower,
                 const std::vector<double>& upper);

 private:
  LpProblem problem_;
  SimplexOptions options_;
  std::unique_ptr<detail::DenseSimplex> simplex_;
};

// Lagrangian dual objective for the given row multipliers. Any multipliers
// with the sign pattern of an optimal dual give an upper bound on the
// primal maximum; +inf when a reduced cost points at an infinite bound.
double DualObjective(const LpProblem& problem, const std::vector<double>& duals);

// Largest violation of row and bound constraints at x.
double PrimalInfeasibility(const LpProblem& problem,
                           const std::vector<double>& x);

}  // namespace tworo::lp

#endif  // TWORO_LP_H_
