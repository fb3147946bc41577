#ifndef TWORO_MODEL_H_
#define TWORO_MODEL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tworo/lp.h"

namespace tworo {

// 0/1 decision vectors.
using BitVector = std::vector<std::uint8_t>;

// Absolute tolerance on oracle objective values.
inline constexpr double kOracleTolerance = 1e-6;

enum class Sense { kMinimize, kMaximize };

// f(z, c) = g + c·h for a fixed solution z.
struct ObjectiveTerms {
  double g = 0.0;
  std::vector<double> h;
};

struct Scenario {
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  bool operator==(const Scenario&) const = default;
};

// A full solution z = (x, y) together with its cached (g, h).
struct Solution {
  BitVector x;
  BitVector y;
  double g = 0.0;
  std::vector<double> h;

  bool SameDecision(const Solution& other) const {
    return x == other.x && y == other.y;
  }
  bool operator==(const Solution&) const = default;
};

// f(z, c) = g(z) + c·h(z). Throws std::invalid_argument on a dimension
// mismatch.
double Evaluate(const Solution& z, const Scenario& c);
double Evaluate(const ObjectiveTerms& terms, const Scenario& c);

class LinearEncoding;

// A two-stage binary problem with bilinear objective g(z) + c·h(z).
struct ProblemSpec {
  using Visitor = std::function<void(const BitVector&)>;

  std::string name;
  int n1 = 0;
  int n2 = 0;
  int m = 0;
  Sense sense = Sense::kMinimize;
  // True once canonicalization flipped a maximize problem; reported values
  // are negated back.
  bool negated = false;

  std::function<ObjectiveTerms(const BitVector& x, const BitVector& y)>
      objective;
  std::function<bool(const BitVector& x)> first_stage_feasible;
  std::function<bool(const BitVector& x, const BitVector& y)> full_feasible;

  // Optional: linear constraint encoding of Z (needed by CCG and MIP oracles).
  std::shared_ptr<const LinearEncoding> encoding;
  // Optional: enumeration of X and of Y(x) (needed by brute force and the
  // enumeration oracles).
  std::function<void(const Visitor&)> enumerate_first_stage;
  std::function<void(const BitVector& x, const Visitor&)> enumerate_second_stage;

  // Evaluates and caches (g, h); throws std::invalid_argument when (x, y)
  // is not in Z.
  Solution MakeSolution(BitVector x, BitVector y) const;
  // Converts a value of the (possibly canonicalized) objective back to the
  // sense in which the problem was stated.
  double ReportedValue(double value) const { return negated ? -value : value; }
};

// Maximize problems become minimize problems by negating g and h; minimize
// problems are returned unchanged. Idempotent.
ProblemSpec Canonicalize(const ProblemSpec& spec);

enum class Fix : std::int8_t { kFree = -1, kZero = 0, kOne = 1 };

// Disjoint index sets I0, I1 of first-stage variables fixed to 0 / 1.
class FixationSet {
 public:
  FixationSet() = default;
  explicit FixationSet(int n1) : state_(n1, Fix::kFree) {}

  // Full fixation of every first-stage variable to x.
  static FixationSet FromFirstStage(const BitVector& x);

  int size() const { return static_cast<int>(state_.size()); }
  Fix at(int i) const { return state_[i]; }
  bool is_free(int i) const { return state_[i] == Fix::kFree; }
  // Throws std::invalid_argument if i is already fixed to the other value.
  void Set(int i, Fix value);
  FixationSet With(int i, Fix value) const;

  std::vector<int> I0() const;
  std::vector<int> I1() const;
  std::vector<int> FreeIndices() const;
  bool AllFixed() const;
  bool Admits(const BitVector& x) const;

  bool operator==(const FixationSet&) const = default;

 private:
  std::vector<Fix> state_;
};

struct LinearRow {
  std::vector<double> coefficients;  // length p
  double rhs = 0.0;
};

// U = { c_bar + P δ : δ_lower <= δ <= δ_upper, a_k·δ <= b_k }.
class UncertaintySet {
 public:
  enum class Kind { kBudgeted, kBox, kGeneral };

  // Throws std::invalid_argument if the δ-polyhedron is empty or unbounded.
  UncertaintySet(std::vector<double> c_bar, std::vector<double> deviation_map,
                 int p, std::vector<double> delta_lower,
                 std::vector<double> delta_upper, std::vector<LinearRow> rows);

  // { c_bar + diag(w_hat) δ : δ ∈ [0,1]^m, Σδ <= gamma }.
  static UncertaintySet Budgeted(std::vector<double> c_bar,
                                 std::vector<double> w_hat, double gamma);
  // { c : lower <= c <= upper }, stored with P = I.
  static UncertaintySet Box(std::vector<double> lower,
                            std::vector<double> upper);

  Kind kind() const { return kind_; }
  int m() const { return static_cast<int>(c_bar_.size()); }
  int p() const { return p_; }
  const std::vector<double>& c_bar() const { return c_bar_; }
  // Row-major m x p.
  const std::vector<double>& deviation_map() const { return map_; }
  double map_at(int i, int j) const { return map_[static_cast<size_t>(i) * p_ + j]; }
  const std::vector<double>& delta_lower() const { return lower_; }
  const std::vector<double>& delta_upper() const { return upper_; }
  const std::vector<LinearRow>& rows() const { return rows_; }
  // Budget Γ for budgeted sets.
  double gamma() const { return gamma_; }

  Scenario Map(const std::vector<double>& delta) const;
  // P^T v.
  std::vector<double> TransposeMap(const std::vector<double>& v) const;
  bool Contains(const Scenario& c, double tolerance = 1e-9) const;

  // Appends p bounded δ variables and the linear rows to an LP; returns the
  // index of the first δ variable.
  int AddDeltaVariables(lp::LpProblem& problem) const;

 private:
  void ValidateShape() const;
  void ValidateNonemptyBounded() const;
  bool IsDiagonal() const;

  Kind kind_ = Kind::kGeneral;
  std::vector<double> c_bar_;
  std::vector<double> map_;
  int p_ = 0;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<LinearRow> rows_;
  double gamma_ = 0.0;
};

// c_bar + P δ_mid, δ_mid the box midpoint scaled uniformly toward 0 until
// it satisfies the linear rows.
Scenario NominalScenario(const UncertaintySet& u);

// Assignment returned by an oracle; (g, h) are filled in by the caller.
struct Decision {
  BitVector x;
  BitVector y;
};

// Thrown when an oracle cannot certify optimality (e.g. MIP limits).
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic oracle: a minimizer of the canonical f(·, c) over Z restricted
// by the fixations, within kOracleTolerance; nullopt if the restriction is
// empty.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::optional<Decision> Solve(const Scenario& c,
                                        const FixationSet& fix) const = 0;
  // Whether concurrent Solve calls are allowed.
  virtual bool thread_safe() const { return true; }
};

}  // namespace tworo

#endif  // TWORO_MODEL_H_
