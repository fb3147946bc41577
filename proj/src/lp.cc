#include "tworo/lp.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tworo::lp {

int LpProblem::AddVariable(double lb, double ub, double cost) {
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  return num_variables() - 1;
}

void LpProblem::AddRow(std::vector<std::pair<int, double>> terms,
                       Relation relation, double rhs) {
  rows.push_back(LpRow{std::move(terms), relation, rhs});
}

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

void Validate(const LpProblem& problem) {
  const int n = problem.num_variables();
  if (static_cast<int>(problem.lower.size()) != n ||
      static_cast<int>(problem.upper.size()) != n) {
    throw std::invalid_argument("LpProblem: bound vectors do not match");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(problem.objective[j]) || std::isnan(problem.lower[j]) ||
        std::isnan(problem.upper[j])) {
      throw std::invalid_argument("LpProblem: NaN in objective or bounds");
    }
    if (problem.lower[j] > problem.upper[j]) {
      throw std::invalid_argument("LpProblem: crossed bounds");
    }
  }
  for (const LpRow& row : problem.rows) {
    if (std::isnan(row.rhs) || std::isinf(row.rhs)) {
      throw std::invalid_argument("LpProblem: non-finite right-hand side");
    }
    for (const auto& [j, a] : row.terms) {
      if (j < 0 || j >= n) {
        throw std::invalid_argument("LpProblem: row index out of range");
      }
      if (!std::isfinite(a)) {
        throw std::invalid_argument("LpProblem: non-finite coefficient");
      }
    }
  }
}

namespace detail {

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Bounded-variable primal simplex on a dense tableau. Columns are laid out
// as [structural | one slack per row | artificials]; row i reads
// a_i·x + s_i (+ sign_i·art_i) = b_i. The slack columns start as the identity,
// so the tableau restricted to them is the current basis inverse.
// Pricing is exact steepest edge. The Harris ratio test uses the EXPAND
// growing tolerance, and the tableau is periodically rebuilt from the basis.
class DenseSimplex {
 public:
  DenseSimplex(const LpProblem& problem, const std::vector<double>& lower,
               const std::vector<double>& upper, const SimplexOptions& options)
      : problem_(problem),
        options_(options),
        n_(problem.num_variables()),
        m_(problem.num_rows()) {
    Setup(lower, upper);
  }

  LpResult Solve();

  // Replaces the structural bounds and re-solves from the current basis with
  // the dual simplex. Needs a basis that was optimal for the last bounds.
  LpResult Resolve(const std::vector<double>& lower,
                   const std::vector<double>& upper);

 private:
  enum class PhaseResult { kOptimal, kUnbounded, kStalled, kInfeasible };

  void Setup(const std::vector<double>& lower,
             const std::vector<double>& upper);
  PhaseResult Iterate(bool phase_one);
  PhaseResult DualIterate();
  LpResult Extract();
  void ComputeReducedCosts();
  void RecomputeBasicValues();
  void Pivot(int row, int col);
  bool Refactor();
  void DriveOutArtificials();

  bool IsArtificial(int j) const { return j >= n_ + m_; }
  double& At(int r, int c) { return tableau_[static_cast<size_t>(r) * cols_ + c]; }

  const LpProblem& problem_;
  SimplexOptions options_;
  int n_;
  int m_;
  int cols_ = 0;
  int iterations_ = 0;

  std::vector<double> tableau_;
  // The tableau as set up (basis = slacks and artificials), kept for
  // refactoring.
  std::vector<double> initial_;
  std::vector<double> lb_, ub_, value_, cost_, reduced_;
  std::vector<VarState> state_;
  std::vector<int> basis_;       // row -> column
  std::vector<int> row_of_;      // column -> row, -1 when nonbasic
  std::vector<int> art_of_row_;  // row -> artificial column or -1
  std::vector<double> art_sign_;
  std::vector<int> pivot_nonzeros_;
};

void DenseSimplex::Setup(const std::vector<double>& lower,
                         const std::vector<double>& upper) {
  const double tol = options_.feasibility_tolerance;
  lb_.assign(n_ + m_, 0.0);
  ub_.assign(n_ + m_, 0.0);
  value_.assign(n_ + m_, 0.0);
  state_.assign(n_ + m_, VarState::kAtLower);
  for (int j = 0; j < n_; ++j) {
    lb_[j] = lower[j];
    ub_[j] = upper[j];
    if (std::isfinite(lb_[j])) {
      value_[j] = lb_[j];
      state_[j] = VarState::kAtLower;
    } else if (std::isfinite(ub_[j])) {
      value_[j] = ub_[j];
      state_[j] = VarState::kAtUpper;
    } else {
      value_[j] = 0.0;
      state_[j] = VarState::kFree;
    }
  }
  basis_.assign(m_, -1);
  art_of_row_.assign(m_, -1);
  art_sign_.assign(m_, 0.0);
  int num_art = 0;
  for (int i = 0; i < m_; ++i) {
    const LpRow& row = problem_.rows[i];
    const int s = n_ + i;
    switch (row.relation) {
      case Relation::kLessEqual:
        lb_[s] = 0.0;
        ub_[s] = kInf;
        break;
      case Relation::kGreaterEqual:
        lb_[s] = -kInf;
        ub_[s] = 0.0;
        break;
      case Relation::kEqual:
        lb_[s] = 0.0;
        ub_[s] = 0.0;
        break;
    }
    double activity = 0.0;
    for (const auto& [j, a] : row.terms) activity += a * value_[j];
    const double residual = row.rhs - activity;
    if (residual >= lb_[s] - tol && residual <= ub_[s] + tol) {
      value_[s] = residual;
      state_[s] = VarState::kBasic;
      basis_[i] = s;
    } else {
      const double bound = std::clamp(residual, lb_[s], ub_[s]);
      value_[s] = bound;
      state_[s] = bound == lb_[s] ? VarState::kAtLower : VarState::kAtUpper;
      art_sign_[i] = residual - bound > 0 ? 1.0 : -1.0;
      art_of_row_[i] = n_ + m_ + num_art;
      ++num_art;
    }
  }
  cols_ = n_ + m_ + num_art;
  lb_.resize(cols_, 0.0);
  ub_.resize(cols_, kInf);
  value_.resize(cols_, 0.0);
  state_.resize(cols_, VarState::kAtLower);
  row_of_.assign(cols_, -1);
  tableau_.assign(static_cast<size_t>(m_) * cols_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const LpRow& row = problem_.rows[i];
    for (const auto& [j, a] : row.terms) At(i, j) += a;
    At(i, n_ + i) = 1.0;
    const int art = art_of_row_[i];
    if (art >= 0) {
      At(i, art) = art_sign_[i];
      double activity = 0.0;
      for (const auto& [j, a] : row.terms) activity += a * value_[j];
      value_[art] = std::abs(row.rhs - activity - value_[n_ + i]);
      state_[art] = VarState::kBasic;
      basis_[i] = art;
      if (art_sign_[i] < 0) {
        for (int c = 0; c < cols_; ++c) At(i, c) = -At(i, c);
      }
    }
    row_of_[basis_[i]] = i;
  }
  initial_ = tableau_;
  cost_.assign(cols_, 0.0);
  reduced_.assign(cols_, 0.0);
}

// Rebuilds tableau = B^-1 · initial by Gaussian elimination with partial
// pivoting, discarding the rounding error of the pivot updates. Returns false
// if the basis is numerically singular.
bool DenseSimplex::Refactor() {
  const int width = m_ + cols_;
  std::vector<double> work(static_cast<size_t>(m_) * width);
  auto w = [&](int r, int c) -> double& { return work[static_cast<size_t>(r) * width + c]; };
  for (int r = 0; r < m_; ++r) {
    for (int k = 0; k < m_; ++k) w(r, k) = initial_[static_cast<size_t>(r) * cols_ + basis_[k]];
    std::copy_n(&initial_[static_cast<size_t>(r) * cols_], cols_, &w(r, m_));
  }
  for (int k = 0; k < m_; ++k) {
    int pivot_row = k;
    for (int r = k + 1; r < m_; ++r) {
      if (std::abs(w(r, k)) > std::abs(w(pivot_row, k))) pivot_row = r;
    }
    if (std::abs(w(pivot_row, k)) < 1e-11) return false;
    if (pivot_row != k) {
      std::swap_ranges(&w(k, 0), &w(k, 0) + width, &w(pivot_row, 0));
    }
    const double p = w(k, k);
    for (int c = k; c < width; ++c) w(k, c) /= p;
    for (int r = 0; r < m_; ++r) {
      if (r == k) continue;
      const double f = w(r, k);
      if (f == 0.0) continue;
      for (int c = k; c < width; ++c) w(r, c) -= f * w(k, c);
    }
  }
  // Row k of the reduced system belongs to basis_[k].
  for (int r = 0; r < m_; ++r) {
    double* dst = &tableau_[static_cast<size_t>(r) * cols_];
    std::copy_n(&w(r, m_), cols_, dst);
    for (int c = 0; c < cols_; ++c) {
      if (std::abs(dst[c]) < 1e-14) dst[c] = 0.0;
    }
    dst[basis_[r]] = 1.0;
  }
  return true;
}

void DenseSimplex::ComputeReducedCosts() {
  reduced_ = cost_;
  for (int i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb == 0.0) continue;
    const double* row = &tableau_[static_cast<size_t>(i) * cols_];
    for (int c = 0; c < cols_; ++c) reduced_[c] -= cb * row[c];
  }
  for (int i = 0; i < m_; ++i) reduced_[basis_[i]] = 0.0;
}

void DenseSimplex::RecomputeBasicValues() {
  std::vector<double> rhs(m_);
  for (int i = 0; i < m_; ++i) {
    const LpRow& row = problem_.rows[i];
    double r = row.rhs;
    for (const auto& [j, a] : row.terms) {
      if (state_[j] != VarState::kBasic) r -= a * value_[j];
    }
    if (state_[n_ + i] != VarState::kBasic) r -= value_[n_ + i];
    const int art = art_of_row_[i];
    if (art >= 0 && state_[art] != VarState::kBasic) {
      r -= art_sign_[i] * value_[art];
    }
    rhs[i] = r;
  }
  for (int r = 0; r < m_; ++r) {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += At(r, n_ + i) * rhs[i];
    value_[basis_[r]] = v;
  }
}

void DenseSimplex::Pivot(int row, int col) {
  const double pivot = At(row, col);
  double* prow = &tableau_[static_cast<size_t>(row) * cols_];
  pivot_nonzeros_.clear();
  for (int c = 0; c < cols_; ++c) {
    if (prow[c] == 0.0) continue;
    prow[c] /= pivot;
    if (std::abs(prow[c]) < 1e-14) {
      prow[c] = 0.0;
    } else {
      pivot_nonzeros_.push_back(c);
    }
  }
  prow[col] = 1.0;
  // A plain loop vectorizes; the index list only pays off on sparse rows.
  const bool dense = pivot_nonzeros_.size() * 4 > static_cast<size_t>(cols_);
  for (int i = 0; i < m_; ++i) {
    if (i == row) continue;
    double* r = &tableau_[static_cast<size_t>(i) * cols_];
    const double f = r[col];
    if (f == 0.0) continue;
    if (dense) {
      for (int c = 0; c < cols_; ++c) r[c] -= f * prow[c];
    } else {
      for (int c : pivot_nonzeros_) r[c] -= f * prow[c];
    }
    r[col] = 0.0;
  }
  const double f = reduced_[col];
  if (f != 0.0) {
    for (int c : pivot_nonzeros_) reduced_[c] -= f * prow[c];
  }
  reduced_[col] = 0.0;

  const int leaving = basis_[row];
  row_of_[leaving] = -1;
  basis_[row] = col;
  row_of_[col] = row;
  state_[col] = VarState::kBasic;
}

DenseSimplex::PhaseResult DenseSimplex::Iterate(bool phase_one) {
  const double opt_tol = options_.optimality_tolerance;
  const double feas_tol = options_.feasibility_tolerance;
  const double piv_tol = options_.pivot_tolerance;
  const int limit = options_.iteration_limit > 0
                        ? options_.iteration_limit
                        : 100 * (m_ + n_) + 1000;
  std::vector<double> alpha(m_);
  std::vector<double> edge_norm(cols_);
  // EXPAND: the Harris tolerance grows a little every pivot and every step
  // moves at least expand_step / |pivot|, so the objective never stalls.
  // Refactoring costs about m pivots.
  const int refactor_interval = std::max(50, m_);
  const double expand_min = 0.5 * feas_tol;
  const double expand_step = 0.49 * feas_tol / 10000;
  double expand = expand_min;

  while (true) {
    if (iterations_ >= limit) return PhaseResult::kStalled;
    expand += expand_step;
    if (expand >= 0.99 * feas_tol) {
      expand = expand_min;
      if (!Refactor()) return PhaseResult::kStalled;
      RecomputeBasicValues();
      ComputeReducedCosts();
    }

    // Pricing.
    std::fill(edge_norm.begin(), edge_norm.end(), 1.0);
    for (int i = 0; i < m_; ++i) {
      const double* row = &tableau_[static_cast<size_t>(i) * cols_];
      for (int c = 0; c < cols_; ++c) edge_norm[c] += row[c] * row[c];
    }
    int entering = -1;
    double dir = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < cols_; ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic) continue;
      if (!phase_one && IsArtificial(j)) continue;
      if (lb_[j] == ub_[j]) continue;
      const double d = reduced_[j];
      double score = 0.0;
      double jdir = 0.0;
      if ((st == VarState::kAtLower || st == VarState::kFree) && d > opt_tol) {
        score = d;
        jdir = 1.0;
      } else if ((st == VarState::kAtUpper || st == VarState::kFree) &&
                 d < -opt_tol) {
        score = -d;
        jdir = -1.0;
      } else {
        continue;
      }
      // Steepest edge: improvement per unit length of the edge.
      score = score * score / edge_norm[j];
      if (score > best_score) {
        best_score = score;
        entering = j;
        dir = jdir;
      }
    }
    if (entering < 0) return PhaseResult::kOptimal;
    ++iterations_;

    for (int i = 0; i < m_; ++i) alpha[i] = At(i, entering);

    // Ratio test. A basic variable moves by -dir·alpha_i per unit step.
    const double flip = ub_[entering] - lb_[entering];
    int leave_row = -1;
    double step = kInf;
    auto ratio_of = [&](int i, double slack) {
      const double rate = -dir * alpha[i];
      const int b = basis_[i];
      if (rate < 0) {
        return std::isfinite(lb_[b]) ? (value_[b] - lb_[b] + slack) / -rate : kInf;
      }
      return std::isfinite(ub_[b]) ? (ub_[b] - value_[b] + slack) / rate : kInf;
    };
    // Harris two-pass: bound relaxed by the working tolerance, then the
    // largest pivot among rows within that bound.
    double relaxed = kInf;
    for (int i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= piv_tol) continue;
      relaxed = std::min(relaxed, ratio_of(i, expand));
    }
    if (std::isfinite(relaxed)) {
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= piv_tol) continue;
        const double ratio = ratio_of(i, 0.0);
        if (ratio <= relaxed &&
            (leave_row < 0 || std::abs(alpha[i]) > std::abs(alpha[leave_row]))) {
          leave_row = i;
        }
      }
      if (leave_row >= 0) {
        step = std::max(ratio_of(leave_row, 0.0),
                        expand_step / std::abs(alpha[leave_row]));
      }
    }

    const bool do_flip = std::isfinite(flip) && flip <= step;
    if (do_flip) step = flip;
    if (!std::isfinite(step)) return PhaseResult::kUnbounded;

    if (step != 0.0) {
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) value_[basis_[i]] -= dir * step * alpha[i];
      }
    }
    if (do_flip) {
      if (dir > 0) {
        value_[entering] = ub_[entering];
        state_[entering] = VarState::kAtUpper;
      } else {
        value_[entering] = lb_[entering];
        state_[entering] = VarState::kAtLower;
      }
      continue;
    }
    value_[entering] += dir * step;
    const int leaving = basis_[leave_row];
    if (-dir * alpha[leave_row] < 0) {
      value_[leaving] = lb_[leaving];
      state_[leaving] = VarState::kAtLower;
    } else {
      value_[leaving] = ub_[leaving];
      state_[leaving] = VarState::kAtUpper;
    }
    Pivot(leave_row, entering);
    if (iterations_ % refactor_interval == 0) {
      if (!Refactor()) return PhaseResult::kStalled;
      RecomputeBasicValues();
      ComputeReducedCosts();
    }
  }
}

void DenseSimplex::DriveOutArtificials() {
  for (int j = n_ + m_; j < cols_; ++j) {
    ub_[j] = 0.0;
    if (state_[j] != VarState::kBasic) {
      value_[j] = 0.0;
      state_[j] = VarState::kAtLower;
    }
  }
  for (int r = 0; r < m_; ++r) {
    const int b = basis_[r];
    if (!IsArtificial(b)) continue;
    int best = -1;
    double best_abs = 1e-7;
    for (int c = 0; c < n_ + m_; ++c) {
      if (state_[c] == VarState::kBasic) continue;
      const double a = std::abs(At(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = c;
      }
    }
    if (best < 0) continue;  // redundant row; artificial stays basic at zero
    value_[b] = 0.0;
    state_[b] = VarState::kAtLower;
    Pivot(r, best);
  }
  RecomputeBasicValues();
}

LpResult DenseSimplex::Solve() {
  LpResult result;
  const bool need_phase_one = cols_ > n_ + m_;
  if (need_phase_one) {
    for (int j = n_ + m_; j < cols_; ++j) cost_[j] = -1.0;
    ComputeReducedCosts();
    const PhaseResult r = Iterate(/*phase_one=*/true);
    result.iterations = iterations_;
    if (r == PhaseResult::kStalled) {
      result.status = LpStatus::kStalled;
      return result;
    }
    RecomputeBasicValues();
    double worst = 0.0;
    for (int j = n_ + m_; j < cols_; ++j) worst = std::max(worst, value_[j]);
    if (worst > options_.feasibility_tolerance) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    DriveOutArtificials();
  }
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (int j = 0; j < n_; ++j) cost_[j] = problem_.objective[j];
  ComputeReducedCosts();
  const PhaseResult r = Iterate(/*phase_one=*/false);
  result.iterations = iterations_;
  if (r == PhaseResult::kStalled) {
    result.status = LpStatus::kStalled;
    return result;
  }
  if (r == PhaseResult::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  return Extract();
}

LpResult DenseSimplex::Extract() {
  RecomputeBasicValues();
  ComputeReducedCosts();
  LpResult result;
  result.iterations = iterations_;
  result.status = LpStatus::kOptimal;
  result.x.assign(value_.begin(), value_.begin() + n_);
  for (int j = 0; j < n_; ++j) {
    // Snap values that drifted within tolerance of a bound.
    if (std::abs(result.x[j] - lb_[j]) < 1e-11) result.x[j] = lb_[j];
    if (std::abs(result.x[j] - ub_[j]) < 1e-11) result.x[j] = ub_[j];
  }
  result.objective = 0.0;
  for (int j = 0; j < n_; ++j) {
    result.objective += problem_.objective[j] * result.x[j];
  }
  result.duals.resize(m_);
  for (int i = 0; i < m_; ++i) result.duals[i] = -reduced_[n_ + i];
  result.reduced_costs.assign(reduced_.begin(), reduced_.begin() + n_);
  return result;
}

LpResult DenseSimplex::Resolve(const std::vector<double>& lower,
                               const std::vector<double>& upper) {
  const double opt_tol = options_.optimality_tolerance;
  for (int j = 0; j < n_; ++j) {
    lb_[j] = lower[j];
    ub_[j] = upper[j];
    if (state_[j] == VarState::kBasic) continue;
    // Nonbasic variables sit at the bound their reduced cost prefers, which
    // keeps the basis dual feasible.
    const bool has_lb = std::isfinite(lb_[j]);
    const bool has_ub = std::isfinite(ub_[j]);
    bool at_upper = state_[j] == VarState::kAtUpper;
    if (lb_[j] == ub_[j]) {
      at_upper = false;
    } else if (has_lb && has_ub) {
      if (reduced_[j] > opt_tol) at_upper = true;
      if (reduced_[j] < -opt_tol) at_upper = false;
    } else if (has_lb != has_ub) {
      at_upper = has_ub;
    } else {
      state_[j] = VarState::kFree;
      value_[j] = 0.0;
      continue;
    }
    state_[j] = at_upper ? VarState::kAtUpper : VarState::kAtLower;
    value_[j] = at_upper ? ub_[j] : lb_[j];
  }
  RecomputeBasicValues();
  iterations_ = 0;
  LpResult result;
  PhaseResult r = DualIterate();
  // A few primal pivots mop up reduced costs that drifted past tolerance.
  if (r == PhaseResult::kOptimal) r = Iterate(/*phase_one=*/false);
  result.iterations = iterations_;
  switch (r) {
    case PhaseResult::kOptimal:
      return Extract();
    case PhaseResult::kInfeasible:
      result.status = LpStatus::kInfeasible;
      return result;
    case PhaseResult::kUnbounded:
      result.status = LpStatus::kUnbounded;
      return result;
    case PhaseResult::kStalled:
      break;
  }
  result.status = LpStatus::kStalled;
  return result;
}

// Bounded dual simplex: the most violated basic variable leaves at the bound
// it violates; the entering column keeps the reduced costs dual feasible
// (Harris two-pass on the dual ratios).
DenseSimplex::PhaseResult DenseSimplex::DualIterate() {
  const double opt_tol = options_.optimality_tolerance;
  const double feas_tol = options_.feasibility_tolerance;
  const double piv_tol = options_.pivot_tolerance;
  const int limit = options_.iteration_limit > 0
                        ? options_.iteration_limit
                        : 100 * (m_ + n_) + 1000;
  const int refactor_interval = std::max(50, m_);
  bool refreshed = false;
  std::vector<int> eligible;

  while (true) {
    if (iterations_ >= limit) return PhaseResult::kStalled;
    int r = -1;
    double worst = feas_tol;
    double target = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (lb_[b] - value_[b] > worst) {
        worst = lb_[b] - value_[b];
        r = i;
        target = lb_[b];
      } else if (value_[b] - ub_[b] > worst) {
        worst = value_[b] - ub_[b];
        r = i;
        target = ub_[b];
      }
    }
    if (r < 0) return PhaseResult::kOptimal;

    const int leaving = basis_[r];
    const bool increase = value_[leaving] < target;
    const double* row = &tableau_[static_cast<size_t>(r) * cols_];
    // x_leaving moves by -row[j] per unit increase of nonbasic x_j.
    eligible.clear();
    double relaxed = kInf;
    auto slack_of = [&](int j) {
      switch (state_[j]) {
        case VarState::kAtLower:
          return std::max(-reduced_[j], 0.0);
        case VarState::kAtUpper:
          return std::max(reduced_[j], 0.0);
        default:
          return std::abs(reduced_[j]);
      }
    };
    for (int j = 0; j < cols_; ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic || lb_[j] == ub_[j]) continue;
      const double a = row[j];
      if (std::abs(a) <= piv_tol) continue;
      const bool up_helps = increase ? a < 0 : a > 0;
      const bool ok = st == VarState::kFree ||
                      (st == VarState::kAtLower && up_helps) ||
                      (st == VarState::kAtUpper && !up_helps);
      if (!ok) continue;
      eligible.push_back(j);
      relaxed = std::min(relaxed, (slack_of(j) + opt_tol) / std::abs(a));
    }
    int entering = -1;
    for (int j : eligible) {
      if (slack_of(j) / std::abs(row[j]) > relaxed) continue;
      if (entering < 0 || std::abs(row[j]) > std::abs(row[entering])) entering = j;
    }
    if (entering < 0) {
      // The row proves infeasibility; confirm it on a fresh factorization.
      if (refreshed) return PhaseResult::kInfeasible;
      if (!Refactor()) return PhaseResult::kStalled;
      RecomputeBasicValues();
      ComputeReducedCosts();
      refreshed = true;
      continue;
    }
    refreshed = false;
    ++iterations_;

    const double theta = (value_[leaving] - target) / row[entering];
    for (int i = 0; i < m_; ++i) {
      const double a = At(i, entering);
      if (a != 0.0) value_[basis_[i]] -= a * theta;
    }
    value_[entering] += theta;
    value_[leaving] = target;
    state_[leaving] = target == lb_[leaving] ? VarState::kAtLower : VarState::kAtUpper;
    Pivot(r, entering);
    if (iterations_ % refactor_interval == 0) {
      if (!Refactor()) return PhaseResult::kStalled;
      RecomputeBasicValues();
      ComputeReducedCosts();
    }
  }
}

}  // namespace detail

namespace {

// A result that does not satisfy its own constraints is a numerical failure.
bool Verified(const LpProblem& problem, const std::vector<double>& lower,
              const std::vector<double>& upper, const LpResult& result) {
  LpProblem bounded = problem;
  bounded.lower = lower;
  bounded.upper = upper;
  double scale = 1.0;
  for (const LpRow& row : problem.rows) scale = std::max(scale, std::abs(row.rhs));
  if (PrimalInfeasibility(bounded, result.x) > 1e-6 * scale) return false;
  assert(result.objective <=
         DualObjective(bounded, result.duals) + 1e-6 * (1.0 + std::abs(result.objective)));
  return true;
}

bool CrossedBounds(const std::vector<double>& lower, const std::vector<double>& upper) {
  for (size_t j = 0; j < lower.size(); ++j) {
    if (lower[j] > upper[j]) return true;
  }
  return false;
}

void CheckBoundSizes(const LpProblem& problem, const std::vector<double>& lower,
                     const std::vector<double>& upper) {
  if (lower.size() != problem.lower.size() || upper.size() != problem.upper.size()) {
    throw std::invalid_argument("SolveLp: bound override size mismatch");
  }
}

}  // namespace

LpResult SolveLp(const LpProblem& problem, const SimplexOptions& options) {
  return SolveLp(problem, problem.lower, problem.upper, options);
}

LpResult SolveLp(const LpProblem& problem, const std::vector<double>& lower,
                 const std::vector<double>& upper,
                 const SimplexOptions& options) {
  Validate(problem);
  CheckBoundSizes(problem, lower, upper);
  if (CrossedBounds(lower, upper)) {
    LpResult infeasible;
    infeasible.status = LpStatus::kInfeasible;
    return infeasible;
  }
  detail::DenseSimplex simplex(problem, lower, upper, options);
  LpResult result = simplex.Solve();
  if (result.status == LpStatus::kOptimal && !Verified(problem, lower, upper, result)) {
    result.status = LpStatus::kStalled;
  }
  return result;
}

WarmStartLp::WarmStartLp(LpProblem problem, SimplexOptions options)
    : problem_(std::move(problem)), options_(options) {
  Validate(problem_);
}

WarmStartLp::~WarmStartLp() = default;

LpResult WarmStartLp::Solve(const std::vector<double>& lower,
                            const std::vector<double>& upper) {
  CheckBoundSizes(problem_, lower, upper);
  if (CrossedBounds(lower, upper)) {
    LpResult infeasible;
    infeasible.status = LpStatus::kInfeasible;
    return infeasible;
  }
  if (simplex_) {
    LpResult warm = simplex_->Resolve(lower, upper);
    if (warm.status == LpStatus::kInfeasible) return warm;
    if (warm.status == LpStatus::kOptimal && Verified(problem_, lower, upper, warm)) {
      return warm;
    }
  }
  // Cold start; keep the basis only when it ended optimal.
  simplex_ = std::make_unique<detail::DenseSimplex>(problem_, lower, upper, options_);
  LpResult cold = simplex_->Solve();
  if (cold.status == LpStatus::kOptimal && !Verified(problem_, lower, upper, cold)) {
    cold.status = LpStatus::kStalled;
  }
  if (cold.status != LpStatus::kOptimal) simplex_.reset();
  return cold;
}

double DualObjective(const LpProblem& problem,
                     const std::vector<double>& duals) {
  const int n = problem.num_variables();
  std::vector<double> reduced = problem.objective;
  double value = 0.0;
  for (int i = 0; i < problem.num_rows(); ++i) {
    const LpRow& row = problem.rows[i];
    double y = duals[i];
    // Clip multipliers with the wrong sign for their row type.
    if (row.relation == Relation::kLessEqual) y = std::max(y, 0.0);
    if (row.relation == Relation::kGreaterEqual) y = std::min(y, 0.0);
    value += row.rhs * y;
    for (const auto& [j, a] : row.terms) reduced[j] -= a * y;
  }
  for (int j = 0; j < n; ++j) {
    const double r = reduced[j];
    if (std::abs(r) <= 1e-9) continue;
    const double bound = r > 0 ? problem.upper[j] : problem.lower[j];
    if (!std::isfinite(bound)) return kInf;
    value += r * bound;
  }
  return value;
}

double PrimalInfeasibility(const LpProblem& problem,
                           const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    worst = std::max(worst, problem.lower[j] - x[j]);
    worst = std::max(worst, x[j] - problem.upper[j]);
  }
  for (const LpRow& row : problem.rows) {
    double activity = 0.0;
    for (const auto& [j, a] : row.terms) activity += a * x[j];
    const double diff = activity - row.rhs;
    switch (row.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, diff);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, -diff);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(diff));
        break;
    }
  }
  return worst;
}

}  // namespace tworo::lp
