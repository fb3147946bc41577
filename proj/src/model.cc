#include "tworo/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tworo/linear_encoding.h"

namespace tworo {

double Evaluate(const ObjectiveTerms& terms, const Scenario& c) {
  if (terms.h.size() != c.values.size()) {
    throw std::invalid_argument("Evaluate: scenario has dimension " +
                                std::to_string(c.values.size()) +
                                ", expected " + std::to_string(terms.h.size()));
  }
  double value = terms.g;
  for (size_t i = 0; i < terms.h.size(); ++i) value += c.values[i] * terms.h[i];
  return value;
}

double Evaluate(const Solution& z, const Scenario& c) {
  if (z.h.size() != c.values.size()) {
    throw std::invalid_argument("Evaluate: scenario has dimension " +
                                std::to_string(c.values.size()) +
                                ", expected " + std::to_string(z.h.size()));
  }
  double value = z.g;
  for (size_t i = 0; i < z.h.size(); ++i) value += c.values[i] * z.h[i];
  return value;
}

Solution ProblemSpec::MakeSolution(BitVector x, BitVector y) const {
  if (static_cast<int>(x.size()) != n1 || static_cast<int>(y.size()) != n2) {
    throw std::invalid_argument("MakeSolution: wrong decision dimensions");
  }
  if (!full_feasible(x, y)) {
    throw std::invalid_argument("MakeSolution: (x, y) is not feasible for " +
                                name);
  }
  ObjectiveTerms terms = objective(x, y);
  if (static_cast<int>(terms.h.size()) != m) {
    throw std::invalid_argument("MakeSolution: objective returned wrong h size");
  }
  return Solution{std::move(x), std::move(y), terms.g, std::move(terms.h)};
}

ProblemSpec Canonicalize(const ProblemSpec& spec) {
  if (spec.sense == Sense::kMinimize) return spec;
  ProblemSpec out = spec;
  out.sense = Sense::kMinimize;
  out.negated = !spec.negated;
  out.objective = [inner = spec.objective](const BitVector& x,
                                           const BitVector& y) {
    ObjectiveTerms t = inner(x, y);
    t.g = -t.g;
    for (double& v : t.h) v = -v;
    return t;
  };
  if (spec.encoding) {
    out.encoding = std::make_shared<NegatedEncoding>(spec.encoding);
  }
  return out;
}

// ---------------------------------------------------------------------------

FixationSet FixationSet::FromFirstStage(const BitVector& x) {
  FixationSet fix(static_cast<int>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) {
    fix.state_[i] = x[i] ? Fix::kOne : Fix::kZero;
  }
  return fix;
}

void FixationSet::Set(int i, Fix value) {
  if (value != Fix::kFree && state_[i] != Fix::kFree && state_[i] != value) {
    throw std::invalid_argument("FixationSet: index " + std::to_string(i) +
                                " would be in both I0 and I1");
  }
  state_[i] = value;
}

FixationSet FixationSet::With(int i, Fix value) const {
  FixationSet copy = *this;
  copy.Set(i, value);
  return copy;
}

std::vector<int> FixationSet::I0() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (state_[i] == Fix::kZero) out.push_back(i);
  }
  return out;
}

std::vector<int> FixationSet::I1() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (state_[i] == Fix::kOne) out.push_back(i);
  }
  return out;
}

std::vector<int> FixationSet::FreeIndices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (state_[i] == Fix::kFree) out.push_back(i);
  }
  return out;
}

bool FixationSet::AllFixed() const {
  return std::none_of(state_.begin(), state_.end(),
                      [](Fix f) { return f == Fix::kFree; });
}

bool FixationSet::Admits(const BitVector& x) const {
  if (static_cast<int>(x.size()) != size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (state_[i] == Fix::kZero && x[i] != 0) return false;
    if (state_[i] == Fix::kOne && x[i] != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

UncertaintySet::UncertaintySet(std::vector<double> c_bar,
                               std::vector<double> deviation_map, int p,
                               std::vector<double> delta_lower,
                               std::vector<double> delta_upper,
                               std::vector<LinearRow> rows)
    : c_bar_(std::move(c_bar)),
      map_(std::move(deviation_map)),
      p_(p),
      lower_(std::move(delta_lower)),
      upper_(std::move(delta_upper)),
      rows_(std::move(rows)) {
  ValidateShape();
  ValidateNonemptyBounded();
}

UncertaintySet UncertaintySet::Budgeted(std::vector<double> c_bar,
                                        std::vector<double> w_hat,
                                        double gamma) {
  if (c_bar.size() != w_hat.size()) {
    throw std::invalid_argument("Budgeted: c_bar and w_hat sizes differ");
  }
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("Budgeted: gamma must be nonnegative");
  }
  const int m = static_cast<int>(c_bar.size());
  std::vector<double> map(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) map[static_cast<size_t>(i) * m + i] = w_hat[i];
  std::vector<LinearRow> rows{LinearRow{std::vector<double>(m, 1.0), gamma}};
  UncertaintySet u(std::move(c_bar), std::move(map), m,
                   std::vector<double>(m, 0.0), std::vector<double>(m, 1.0),
                   std::move(rows));
  u.kind_ = Kind::kBudgeted;
  u.gamma_ = gamma;
  return u;
}

UncertaintySet UncertaintySet::Box(std::vector<double> lower,
                                   std::vector<double> upper) {
  const int m = static_cast<int>(lower.size());
  std::vector<double> map(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) map[static_cast<size_t>(i) * m + i] = 1.0;
  UncertaintySet u(std::vector<double>(m, 0.0), std::move(map), m,
                   std::move(lower), std::move(upper), {});
  u.kind_ = Kind::kBox;
  return u;
}

void UncertaintySet::ValidateShape() const {
  const size_t m = c_bar_.size();
  if (p_ < 0 || map_.size() != m * static_cast<size_t>(p_) ||
      lower_.size() != static_cast<size_t>(p_) ||
      upper_.size() != static_cast<size_t>(p_)) {
    throw std::invalid_argument("UncertaintySet: inconsistent dimensions");
  }
  for (int j = 0; j < p_; ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        lower_[j] > upper_[j]) {
      throw std::invalid_argument("UncertaintySet: invalid delta bounds");
    }
  }
  for (const LinearRow& row : rows_) {
    if (row.coefficients.size() != static_cast<size_t>(p_) ||
        !std::isfinite(row.rhs)) {
      throw std::invalid_argument("UncertaintySet: malformed linear row");
    }
  }
  for (double v : map_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("UncertaintySet: non-finite deviation map");
    }
  }
  for (double v : c_bar_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("UncertaintySet: non-finite nominal vector");
    }
  }
}

int UncertaintySet::AddDeltaVariables(lp::LpProblem& problem) const {
  const int offset = problem.num_variables();
  for (int j = 0; j < p_; ++j) problem.AddVariable(lower_[j], upper_[j]);
  for (const LinearRow& row : rows_) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < p_; ++j) {
      if (row.coefficients[j] != 0.0) {
        terms.emplace_back(offset + j, row.coefficients[j]);
      }
    }
    problem.AddRow(std::move(terms), lp::Relation::kLessEqual, row.rhs);
  }
  return offset;
}

void UncertaintySet::ValidateNonemptyBounded() const {
  bool all_finite = true;
  for (int j = 0; j < p_; ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) {
      all_finite = false;
    }
  }
  if (all_finite) {
    if (rows_.empty()) return;
    lp::LpProblem feasibility;
    AddDeltaVariables(feasibility);
    if (lp::SolveLp(feasibility).status != lp::LpStatus::kOptimal) {
      throw std::invalid_argument("UncertaintySet: empty delta polyhedron");
    }
    return;
  }
  for (int j = 0; j < p_; ++j) {
    for (double sign : {1.0, -1.0}) {
      lp::LpProblem probe;
      AddDeltaVariables(probe);
      probe.objective[j] = sign;
      const lp::LpStatus status = lp::SolveLp(probe).status;
      if (status == lp::LpStatus::kInfeasible) {
        throw std::invalid_argument("UncertaintySet: empty delta polyhedron");
      }
      if (status == lp::LpStatus::kUnbounded) {
        throw std::invalid_argument("UncertaintySet: unbounded in direction " +
                                    std::to_string(j));
      }
    }
  }
}

bool UncertaintySet::IsDiagonal() const {
  if (m() != p_) return false;
  for (int i = 0; i < p_; ++i) {
    for (int j = 0; j < p_; ++j) {
      if (i != j && map_at(i, j) != 0.0) return false;
    }
  }
  return true;
}

Scenario UncertaintySet::Map(const std::vector<double>& delta) const {
  if (static_cast<int>(delta.size()) != p_) {
    throw std::invalid_argument("UncertaintySet::Map: wrong delta dimension");
  }
  Scenario c{c_bar_};
  for (int i = 0; i < m(); ++i) {
    const double* row = &map_[static_cast<size_t>(i) * p_];
    double v = 0.0;
    for (int j = 0; j < p_; ++j) v += row[j] * delta[j];
    c.values[i] += v;
  }
  return c;
}

std::vector<double> UncertaintySet::TransposeMap(
    const std::vector<double>& v) const {
  std::vector<double> out(p_, 0.0);
  for (int i = 0; i < m(); ++i) {
    if (v[i] == 0.0) continue;
    const double* row = &map_[static_cast<size_t>(i) * p_];
    for (int j = 0; j < p_; ++j) out[j] += row[j] * v[i];
  }
  return out;
}

bool UncertaintySet::Contains(const Scenario& c, double tolerance) const {
  if (c.size() != m()) return false;
  if (IsDiagonal()) {
    std::vector<double> delta(p_);
    bool free_coordinate = false;
    bool ok = true;
    for (int j = 0; j < p_ && ok; ++j) {
      const double diff = c.values[j] - c_bar_[j];
      const double scale = map_at(j, j);
      if (scale == 0.0) {
        if (std::abs(diff) > tolerance) return false;
        free_coordinate = true;
        delta[j] = std::clamp(0.0, lower_[j], upper_[j]);
      } else {
        delta[j] = diff / scale;
        // Tolerance is on c; translate it into δ units.
        const double tol = tolerance / std::abs(scale);
        if (delta[j] < lower_[j] - tol || delta[j] > upper_[j] + tol) {
          return false;
        }
        delta[j] = std::clamp(delta[j], lower_[j], upper_[j]);
      }
    }
    for (const LinearRow& row : rows_) {
      double lhs = 0.0;
      for (int j = 0; j < p_; ++j) lhs += row.coefficients[j] * delta[j];
      if (lhs > row.rhs + tolerance * (1.0 + std::abs(row.rhs))) ok = false;
    }
    if (ok) return true;
    if (!free_coordinate) return false;
  }
  // General case: find δ with |c_bar + Pδ - c| <= tol inside the polyhedron.
  lp::LpProblem probe;
  const int offset = AddDeltaVariables(probe);
  for (int i = 0; i < m(); ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < p_; ++j) {
      if (map_at(i, j) != 0.0) terms.emplace_back(offset + j, map_at(i, j));
    }
    const double target = c.values[i] - c_bar_[i];
    probe.AddRow(terms, lp::Relation::kLessEqual, target + tolerance);
    probe.AddRow(std::move(terms), lp::Relation::kGreaterEqual,
                 target - tolerance);
  }
  return lp::SolveLp(probe).status == lp::LpStatus::kOptimal;
}

Scenario NominalScenario(const UncertaintySet& u) {
  const int p = u.p();
  std::vector<double> mid(p);
  bool zero_inside = true;
  for (int j = 0; j < p; ++j) {
    const double lo = u.delta_lower()[j];
    const double hi = u.delta_upper()[j];
    if (std::isfinite(lo) && std::isfinite(hi)) {
      mid[j] = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      mid[j] = lo;
    } else if (std::isfinite(hi)) {
      mid[j] = hi;
    } else {
      mid[j] = 0.0;
    }
    if (lo > 0.0 || hi < 0.0) zero_inside = false;
  }
  double scale = 1.0;
  bool scalable = true;
  for (const LinearRow& row : u.rows()) {
    double lhs = 0.0;
    for (int j = 0; j < p; ++j) lhs += row.coefficients[j] * mid[j];
    if (lhs <= row.rhs) continue;
    if (row.rhs < 0.0 || !zero_inside) {
      scalable = false;
      break;
    }
    scale = std::min(scale, row.rhs / lhs);
  }
  if (scalable) {
    for (double& v : mid) v *= scale;
    return u.Map(mid);
  }
  // Scaling toward the origin cannot reach the polyhedron; take any vertex.
  lp::LpProblem probe;
  const int offset = u.AddDeltaVariables(probe);
  const lp::LpResult r = lp::SolveLp(probe);
  if (r.status != lp::LpStatus::kOptimal) {
    throw std::logic_error("NominalScenario: uncertainty set is empty");
  }
  std::vector<double> delta(r.x.begin() + offset, r.x.begin() + offset + p);
  return u.Map(delta);
}

}  // namespace tworo
