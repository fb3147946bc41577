#include "tworo/problems/capital_budgeting.h"

#include <memory>
#include <random>
#include <stdexcept>

#include "tworo/linear_encoding.h"

namespace tworo::problems {

namespace {

constexpr double kBudgetSlack = 1e-9;

bool FirstStageFits(const CbInstance& in, const BitVector& x) {
  double spent = 0.0;
  for (int i = 0; i < in.n; ++i) spent += in.cost[i] * x[i];
  return spent <= in.budget + in.early_loan * x[in.n] + kBudgetSlack;
}

bool SecondStageFits(const CbInstance& in, const BitVector& x,
                     const BitVector& y) {
  double spent = 0.0;
  for (int i = 0; i < in.n; ++i) {
    if (x[i] && y[i]) return false;
    spent += in.cost[i] * (x[i] + y[i]);
  }
  return spent <= in.budget + in.early_loan * x[in.n] +
                      in.late_loan * y[in.n] + kBudgetSlack;
}

class CbEncoding : public LinearEncoding {
 public:
  explicit CbEncoding(std::shared_ptr<const CbInstance> instance)
      : instance_(std::move(instance)) {}

  void AddFirstStageRows(ModelBuilder& builder,
                         std::span<const int> x_vars) const override {
    const CbInstance& in = *instance_;
    LinearExpr spend;
    for (int i = 0; i < in.n; ++i) spend.Add(x_vars[i], in.cost[i]);
    spend.Add(x_vars[in.n], -in.early_loan);
    builder.AddRow(spend, lp::Relation::kLessEqual, in.budget);
  }

  ScenarioBlock AddScenarioBlock(ModelBuilder& builder,
                                 std::span<const int> x_vars,
                                 const Scenario& c) const override {
    const CbInstance& in = *instance_;
    ScenarioBlock block;
    for (int i = 0; i <= in.n; ++i) block.y_vars.push_back(builder.AddBinary());
    LinearExpr spend;
    for (int i = 0; i < in.n; ++i) {
      spend.Add(x_vars[i], in.cost[i]);
      spend.Add(block.y_vars[i], in.cost[i]);
      LinearExpr once;
      once.Add(x_vars[i], 1.0);
      once.Add(block.y_vars[i], 1.0);
      builder.AddRow(once, lp::Relation::kLessEqual, 1.0);
    }
    spend.Add(x_vars[in.n], -in.early_loan);
    spend.Add(block.y_vars[in.n], -in.late_loan);
    builder.AddRow(spend, lp::Relation::kLessEqual, in.budget);

    for (int i = 0; i < in.n; ++i) {
      double factor = 1.0;
      for (int r = 0; r < in.m; ++r) factor += 0.5 * in.q(i, r) * c.values[r];
      const double p = factor * in.profit[i];
      block.objective.Add(x_vars[i], p);
      block.objective.Add(block.y_vars[i], in.defer_factor * p);
    }
    block.objective.Add(x_vars[in.n], -in.loan_rate);
    block.objective.Add(block.y_vars[in.n], -in.loan_rate * in.late_premium);
    return block;
  }

 private:
  std::shared_ptr<const CbInstance> instance_;
};

void EnumerateBits(int size, const ProblemSpec::Visitor& visit,
                   const std::function<bool(const BitVector&)>& keep) {
  if (size > 24) throw std::invalid_argument("cb: too many variables to enumerate");
  BitVector v(size);
  for (long mask = 0; mask < (1L << size); ++mask) {
    for (int i = 0; i < size; ++i) v[i] = (mask >> i) & 1;
    if (keep(v)) visit(v);
  }
}

}  // namespace

void Validate(const CbInstance& in) {
  if (in.n < 1 || in.m < 1) throw std::invalid_argument("cb: n, m must be >= 1");
  if (static_cast<int>(in.cost.size()) != in.n ||
      static_cast<int>(in.profit.size()) != in.n ||
      in.loading.size() != static_cast<size_t>(in.n) * in.m) {
    throw std::invalid_argument("cb: array sizes do not match n, m");
  }
  for (double c : in.cost) {
    if (!(c >= 0.0)) throw std::invalid_argument("cb: costs must be >= 0");
  }
  if (!(in.defer_factor >= 0.0 && in.defer_factor < 1.0)) {
    throw std::invalid_argument("cb: deferral factor must be in [0,1)");
  }
  if (!(in.late_premium > 1.0)) {
    throw std::invalid_argument("cb: late loan premium must exceed 1");
  }
  if (!(in.budget >= 0.0) || !(in.early_loan >= 0.0) || !(in.late_loan >= 0.0) ||
      !(in.loan_rate >= 0.0)) {
    throw std::invalid_argument("cb: budget, loans and rate must be >= 0");
  }
}

double CbProfit(const CbInstance& in, const BitVector& x, const BitVector& y,
                const std::vector<double>& xi) {
  double value = -in.loan_rate * x[in.n] - in.loan_rate * in.late_premium * y[in.n];
  for (int i = 0; i < in.n; ++i) {
    double factor = 1.0;
    for (int r = 0; r < in.m; ++r) factor += 0.5 * in.q(i, r) * xi[r];
    value += factor * in.profit[i] * (x[i] + in.defer_factor * y[i]);
  }
  return value;
}

ProblemSpec MakeSpec(const CbInstance& instance) {
  Validate(instance);
  auto data = std::make_shared<const CbInstance>(instance);
  ProblemSpec spec;
  spec.name = instance.name;
  spec.n1 = instance.n + 1;
  spec.n2 = instance.n + 1;
  spec.m = instance.m;
  spec.sense = Sense::kMaximize;
  spec.objective = [data](const BitVector& x, const BitVector& y) {
    const CbInstance& in = *data;
    ObjectiveTerms t;
    t.g = -in.loan_rate * x[in.n] - in.loan_rate * in.late_premium * y[in.n];
    t.h.assign(in.m, 0.0);
    for (int i = 0; i < in.n; ++i) {
      const double amount = in.profit[i] * (x[i] + in.defer_factor * y[i]);
      t.g += amount;
      for (int r = 0; r < in.m; ++r) t.h[r] += 0.5 * in.q(i, r) * amount;
    }
    return t;
  };
  spec.first_stage_feasible = [data](const BitVector& x) {
    return static_cast<int>(x.size()) == data->n + 1 && FirstStageFits(*data, x);
  };
  spec.full_feasible = [data](const BitVector& x, const BitVector& y) {
    return FirstStageFits(*data, x) && SecondStageFits(*data, x, y);
  };
  spec.enumerate_first_stage = [data](const ProblemSpec::Visitor& visit) {
    EnumerateBits(data->n + 1, visit,
                  [&](const BitVector& x) { return FirstStageFits(*data, x); });
  };
  spec.enumerate_second_stage = [data](const BitVector& x,
                                       const ProblemSpec::Visitor& visit) {
    EnumerateBits(data->n + 1, visit, [&](const BitVector& y) {
      return SecondStageFits(*data, x, y);
    });
  };
  spec.encoding = std::make_shared<CbEncoding>(data);
  return spec;
}

UncertaintySet MakeUncertainty(const CbInstance& instance) {
  Validate(instance);
  return UncertaintySet::Box(std::vector<double>(instance.m, -1.0),
                             std::vector<double>(instance.m, 1.0));
}

CbInstance GenerateCb(const CbGeneratorOptions& options) {
  if (options.n < 1 || options.m < 1) {
    throw std::invalid_argument("GenerateCb: n, m must be >= 1");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CbInstance in;
  in.name = "cb-n" + std::to_string(options.n) + "-m" +
            std::to_string(options.m) + "-s" + std::to_string(options.seed);
  in.n = options.n;
  in.m = options.m;
  double total = 0.0;
  for (int i = 0; i < in.n; ++i) {
    in.cost.push_back(10.0 * unit(rng));
    in.profit.push_back(in.cost.back() / 5.0);
    total += in.cost.back();
  }
  // Uniform on the simplex (normalized exponentials), then random signs so
  // projects hedge each other and the adversary has no dominant corner.
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution flip(0.5);
  for (int i = 0; i < in.n; ++i) {
    std::vector<double> row(in.m);
    double sum = 0.0;
    for (double& v : row) sum += (v = expo(rng));
    for (double v : row) in.loading.push_back((flip(rng) ? -v : v) / sum);
  }
  in.budget = total / 2.0;
  in.early_loan = in.late_loan = 0.2 * in.budget;
  return in;
}

}  // namespace tworo::problems
