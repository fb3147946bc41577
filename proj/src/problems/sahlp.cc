#include "tworo/problems/sahlp.h"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "tworo/linear_encoding.h"

namespace tworo::problems {

namespace {

// hub(i) for a single allocation; throws if y is not one.
std::vector<int> Hubs(const SahlpInstance& instance, const BitVector& x,
                      const BitVector& y) {
  const int n = instance.n;
  std::vector<int> hub(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (!y[static_cast<size_t>(i) * n + k]) continue;
      if (hub[i] != -1) {
        throw std::invalid_argument("sahlp: node " + std::to_string(i) +
                                    " allocated twice");
      }
      if (!x[k]) {
        throw std::invalid_argument("sahlp: node " + std::to_string(i) +
                                    " allocated to closed hub " +
                                    std::to_string(k));
      }
      hub[i] = k;
    }
    if (hub[i] == -1) {
      throw std::invalid_argument("sahlp: node " + std::to_string(i) +
                                  " unallocated");
    }
  }
  return hub;
}

bool IsSingleAllocation(const SahlpInstance& instance, const BitVector& x,
                        const BitVector& y) {
  const int n = instance.n;
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int k = 0; k < n; ++k) {
      if (!y[static_cast<size_t>(i) * n + k]) continue;
      if (!x[k]) return false;
      ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

class FlowEncoding : public LinearEncoding {
 public:
  explicit FlowEncoding(std::shared_ptr<const SahlpInstance> instance)
      : instance_(std::move(instance)) {}

  void AddFirstStageRows(ModelBuilder& builder,
                         std::span<const int> x_vars) const override {
    LinearExpr some_hub;
    for (int x : x_vars) some_hub.Add(x, 1.0);
    builder.AddRow(some_hub, lp::Relation::kGreaterEqual, 1.0);
  }

  ScenarioBlock AddScenarioBlock(ModelBuilder& builder,
                                 std::span<const int> x_vars,
                                 const Scenario& c) const override {
    const SahlpInstance& in = *instance_;
    const int n = in.n;
    auto w = [&](int i, int j) { return c.values[static_cast<size_t>(i) * n + j]; };
    std::vector<double> out(n, 0.0), in_flow(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out[i] += w(i, j);
        in_flow[j] += w(i, j);
      }
    }
    ScenarioBlock block;
    for (int k = 0; k < n; ++k) block.objective.Add(x_vars[k], in.setup[k]);

    std::vector<int> y(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      LinearExpr assign;
      for (int k = 0; k < n; ++k) {
        const int var = builder.AddBinary();
        y[static_cast<size_t>(i) * n + k] = var;
        block.y_vars.push_back(var);
        assign.Add(var, 1.0);
        block.objective.Add(
            var, in.d(i, k) * (in.collection * out[i] + in.distribution * in_flow[i]));
        LinearExpr link;
        link.Add(var, 1.0);
        link.Add(x_vars[k], -1.0);
        builder.AddRow(link, lp::Relation::kLessEqual, 0.0);
      }
      builder.AddRow(assign, lp::Relation::kEqual, 1.0);
    }
    auto yv = [&](int i, int k) { return y[static_cast<size_t>(i) * n + k]; };

    // z[i][k][m]: flow from origin i sent from hub k to hub m (m != k; the
    // k == m terms cancel in the balance and cost nothing).
    std::vector<int> z(static_cast<size_t>(n) * n * n, -1);
    auto zi = [&](int i, int k, int m) -> int& {
      return z[(static_cast<size_t>(i) * n + k) * n + m];
    };
    for (int i = 0; i < n; ++i) {
      if (out[i] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
          if (m == k) continue;
          zi(i, k, m) = builder.AddContinuous(0.0, lp::kInf);
          block.objective.Add(zi(i, k, m), in.transfer * in.d(k, m));
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (out[i] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        LinearExpr balance, capacity;
        for (int m = 0; m < n; ++m) {
          if (m == k) continue;
          balance.Add(zi(i, k, m), 1.0);
          balance.Add(zi(i, m, k), -1.0);
          capacity.Add(zi(i, k, m), 1.0);
        }
        balance.Add(yv(i, k), -out[i]);
        for (int j = 0; j < n; ++j) balance.Add(yv(j, k), w(i, j));
        builder.AddRow(balance, lp::Relation::kEqual, 0.0);
        capacity.Add(yv(i, k), -out[i]);
        builder.AddRow(capacity, lp::Relation::kLessEqual, 0.0);
      }
    }
    return block;
  }

 private:
  std::shared_ptr<const SahlpInstance> instance_;
};

}  // namespace

void Validate(const SahlpInstance& in) {
  const size_t nn = static_cast<size_t>(in.n) * in.n;
  if (in.n < 1) throw std::invalid_argument("sahlp: n must be positive");
  if (in.distance.size() != nn || in.flow_nominal.size() != nn ||
      in.flow_deviation.size() != nn || in.setup.size() != static_cast<size_t>(in.n)) {
    throw std::invalid_argument("sahlp: array sizes do not match n");
  }
  for (size_t r = 0; r < nn; ++r) {
    if (!(in.distance[r] >= 0.0) || !(in.flow_nominal[r] >= 0.0) ||
        !(in.flow_deviation[r] >= 0.0)) {
      throw std::invalid_argument("sahlp: distances and flows must be >= 0");
    }
  }
  for (int k = 0; k < in.n; ++k) {
    if (in.d(k, k) != 0.0) {
      throw std::invalid_argument("sahlp: distance diagonal must be zero");
    }
  }
  if (!(in.collection >= 0.0) || !(in.transfer >= 0.0) ||
      !(in.distribution >= 0.0)) {
    throw std::invalid_argument("sahlp: cost factors must be >= 0");
  }
  if (!(in.gamma >= 0.0)) throw std::invalid_argument("sahlp: gamma < 0");
}

double SahlpCost(const SahlpInstance& in, const BitVector& x,
                 const BitVector& y, const std::vector<double>& w) {
  const int n = in.n;
  Hubs(in, x, y);
  auto W = [&](int i, int j) { return w[static_cast<size_t>(i) * n + j]; };
  auto Y = [&](int i, int k) { return y[static_cast<size_t>(i) * n + k] ? 1.0 : 0.0; };
  double cost = 0.0;
  for (int k = 0; k < n; ++k) cost += in.setup[k] * x[k];
  for (int i = 0; i < n; ++i) {
    double out = 0.0, in_flow = 0.0;
    for (int j = 0; j < n; ++j) {
      out += W(i, j);
      in_flow += W(j, i);
    }
    for (int k = 0; k < n; ++k) {
      cost += in.d(i, k) * (in.collection * out + in.distribution * in_flow) * Y(i, k);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
          cost += in.transfer * W(i, j) * in.d(k, m) * Y(i, k) * Y(j, m);
        }
      }
    }
  }
  return cost;
}

ProblemSpec MakeSpec(const SahlpInstance& instance) {
  Validate(instance);
  auto data = std::make_shared<const SahlpInstance>(instance);
  const int n = instance.n;
  ProblemSpec spec;
  spec.name = instance.name;
  spec.n1 = n;
  spec.n2 = n * n;
  spec.m = n * n;
  spec.sense = Sense::kMinimize;
  spec.objective = [data](const BitVector& x, const BitVector& y) {
    const SahlpInstance& in = *data;
    const std::vector<int> hub = Hubs(in, x, y);
    ObjectiveTerms t;
    for (int k = 0; k < in.n; ++k) t.g += in.setup[k] * x[k];
    t.h.resize(static_cast<size_t>(in.n) * in.n);
    for (int i = 0; i < in.n; ++i) {
      for (int j = 0; j < in.n; ++j) {
        t.h[static_cast<size_t>(i) * in.n + j] =
            in.collection * in.d(i, hub[i]) + in.distribution * in.d(j, hub[j]) +
            in.transfer * in.d(hub[i], hub[j]);
      }
    }
    return t;
  };
  spec.first_stage_feasible = [n](const BitVector& x) {
    if (static_cast<int>(x.size()) != n) return false;
    for (auto v : x) {
      if (v) return true;
    }
    return false;
  };
  spec.full_feasible = [data](const BitVector& x, const BitVector& y) {
    return IsSingleAllocation(*data, x, y);
  };
  spec.enumerate_first_stage = [n](const ProblemSpec::Visitor& visit) {
    if (n > 20) throw std::invalid_argument("sahlp: too many hubs to enumerate");
    for (long mask = 1; mask < (1L << n); ++mask) {
      BitVector x(n);
      for (int k = 0; k < n; ++k) x[k] = (mask >> k) & 1;
      visit(x);
    }
  };
  spec.enumerate_second_stage = [n](const BitVector& x,
                                    const ProblemSpec::Visitor& visit) {
    std::vector<int> open;
    for (int k = 0; k < n; ++k) {
      if (x[k]) open.push_back(k);
    }
    if (open.empty()) return;
    std::vector<int> digit(n, 0);
    while (true) {
      BitVector y(static_cast<size_t>(n) * n, 0);
      for (int i = 0; i < n; ++i) y[static_cast<size_t>(i) * n + open[digit[i]]] = 1;
      visit(y);
      int i = n - 1;
      while (i >= 0 && digit[i] + 1 == static_cast<int>(open.size())) digit[i--] = 0;
      if (i < 0) break;
      ++digit[i];
    }
  };
  spec.encoding = std::make_shared<FlowEncoding>(data);
  return spec;
}

UncertaintySet MakeUncertainty(const SahlpInstance& instance) {
  Validate(instance);
  return UncertaintySet::Budgeted(instance.flow_nominal, instance.flow_deviation,
                                  instance.gamma);
}

SahlpEnumerationOracle::SahlpEnumerationOracle(SahlpInstance instance,
                                               int max_nodes)
    : instance_(std::move(instance)) {
  Validate(instance_);
  if (instance_.n > max_nodes) {
    throw std::invalid_argument("SahlpEnumerationOracle: n = " +
                                std::to_string(instance_.n) + " exceeds cap " +
                                std::to_string(max_nodes));
  }
}

std::optional<Decision> SahlpEnumerationOracle::Solve(
    const Scenario& c, const FixationSet& fix) const {
  const SahlpInstance& in = instance_;
  const int n = in.n;
  if (c.size() != n * n || fix.size() != n) {
    throw std::invalid_argument("SahlpEnumerationOracle: dimension mismatch");
  }
  for (double v : c.values) {
    if (v < -1e-9) {
      throw std::invalid_argument("SahlpEnumerationOracle: negative flow");
    }
  }
  auto w = [&](int i, int j) { return c.values[static_cast<size_t>(i) * n + j]; };
  std::vector<int> allowed;
  std::vector<int> opened(n, 0);
  double base = 0.0;
  for (int k = 0; k < n; ++k) {
    if (fix.at(k) == Fix::kZero) continue;
    allowed.push_back(k);
    if (fix.at(k) == Fix::kOne || in.setup[k] < 0.0) {
      opened[k] = 1;
      base += in.setup[k];
    }
  }
  if (allowed.empty()) return std::nullopt;
  std::vector<double> spoke(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double out = 0.0, in_flow = 0.0;
    for (int j = 0; j < n; ++j) {
      out += w(i, j);
      in_flow += w(j, i);
    }
    spoke[i] = in.collection * out + in.distribution * in_flow;
  }
  const std::vector<int> base_open = opened;
  std::vector<int> assign(n, -1), best_assign;
  double best = std::numeric_limits<double>::infinity();

  auto search = [&](auto& self, int i, double partial) -> void {
    if (partial >= best) return;
    if (i == n) {
      best = partial;
      best_assign = assign;
      return;
    }
    for (int k : allowed) {
      double inc = spoke[i] * in.d(i, k);
      if (!opened[k]) inc += in.setup[k];
      for (int j = 0; j < i; ++j) {
        inc += in.transfer * (w(i, j) * in.d(k, assign[j]) +
                              w(j, i) * in.d(assign[j], k));
      }
      ++opened[k];
      assign[i] = k;
      self(self, i + 1, partial + inc);
      --opened[k];
    }
  };
  search(search, 0, base);

  Decision d;
  d.x.assign(n, 0);
  d.y.assign(static_cast<size_t>(n) * n, 0);
  for (int k = 0; k < n; ++k) d.x[k] = base_open[k] != 0;
  for (int i = 0; i < n; ++i) {
    d.x[best_assign[i]] = 1;
    d.y[static_cast<size_t>(i) * n + best_assign[i]] = 1;
  }
  return d;
}

std::unique_ptr<Oracle> MakeSahlpFlowOracle(const SahlpInstance& instance,
                                            mip::MipLimits limits) {
  return std::make_unique<EncodingOracle>(MakeSpec(instance), limits);
}

SahlpInstance GenerateSahlp(const SahlpGeneratorOptions& options) {
  if (options.n < 1) throw std::invalid_argument("GenerateSahlp: n < 1");
  if (!(options.gamma_fraction >= 0.0) || !(options.deviation_multiplier >= 0.0)) {
    throw std::invalid_argument(
        "GenerateSahlp: gamma fraction and deviation multiplier must be >= 0");
  }
  const int n = options.n;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> demand(1.0, 10.0);

  SahlpInstance in;
  in.name = "sahlp-n" + std::to_string(n) + "-s" + std::to_string(options.seed);
  in.n = n;
  std::vector<double> px(n), py(n);
  for (int i = 0; i < n; ++i) {
    px[i] = unit(rng);
    py[i] = unit(rng);
  }
  const size_t nn = static_cast<size_t>(n) * n;
  in.distance.assign(nn, 0.0);
  in.flow_nominal.assign(nn, 0.0);
  in.flow_deviation.assign(nn, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      in.distance[static_cast<size_t>(i) * n + j] = std::hypot(px[i] - px[j], py[i] - py[j]);
      in.flow_nominal[static_cast<size_t>(i) * n + j] = demand(rng);
    }
  }
  for (size_t r = 0; r < nn; ++r) {
    in.flow_deviation[r] =
        options.deviation_multiplier * in.flow_nominal[r] * unit(rng);
  }
  in.setup.resize(n);
  for (int k = 0; k < n; ++k) {
    double out = 0.0;
    for (int j = 0; j < n; ++j) out += in.flow_nominal[static_cast<size_t>(k) * n + j];
    in.setup[k] = out > 0.0 ? 15.0 * std::log(out) : 0.0;
  }
  if (options.cab_costs) {
    in.collection = 1.0;
    in.distribution = 1.0;
    in.transfer = options.cab_transfer;
  }
  in.gamma = std::floor(options.gamma_fraction * n * n + 1e-9);
  return in;
}

}  // namespace tworo::problems
