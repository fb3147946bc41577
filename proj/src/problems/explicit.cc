#include "tworo/problems/explicit.h"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "tworo/linear_encoding.h"

namespace tworo::problems {

namespace {

std::vector<BitVector> DistinctFirstStages(const ExplicitInstance& instance) {
  std::vector<BitVector> xs;
  for (const ExplicitEntry& e : instance.entries) {
    if (std::find(xs.begin(), xs.end(), e.x) == xs.end()) xs.push_back(e.x);
  }
  return xs;
}

class ExplicitEncoding : public LinearEncoding {
 public:
  explicit ExplicitEncoding(std::shared_ptr<const ExplicitInstance> instance)
      : instance_(std::move(instance)) {}

  void AddFirstStageRows(ModelBuilder&, std::span<const int>) const override {
    // Every block already forces x onto a listed first stage.
  }

  ScenarioBlock AddScenarioBlock(ModelBuilder& builder,
                                 std::span<const int> x_vars,
                                 const Scenario& c) const override {
    const auto& entries = instance_->entries;
    std::vector<int> selectors;
    LinearExpr choose_one;
    ScenarioBlock block;
    for (const ExplicitEntry& e : entries) {
      const int s = builder.AddBinary();
      selectors.push_back(s);
      choose_one.Add(s, 1.0);
      double value = e.g;
      for (size_t r = 0; r < e.h.size(); ++r) value += c.values[r] * e.h[r];
      block.objective.Add(s, value);
    }
    builder.AddRow(choose_one, lp::Relation::kEqual, 1.0);
    for (int i = 0; i < instance_->n1; ++i) {
      LinearExpr link;
      link.Add(x_vars[i], 1.0);
      for (size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].x[i]) link.Add(selectors[k], -1.0);
      }
      builder.AddRow(link, lp::Relation::kEqual, 0.0);
    }
    for (int j = 0; j < instance_->n2; ++j) {
      const int y = builder.AddContinuous(0.0, 1.0);
      block.y_vars.push_back(y);
      LinearExpr link;
      link.Add(y, 1.0);
      for (size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].y[j]) link.Add(selectors[k], -1.0);
      }
      builder.AddRow(link, lp::Relation::kEqual, 0.0);
    }
    return block;
  }

 private:
  std::shared_ptr<const ExplicitInstance> instance_;
};

}  // namespace

void Validate(const ExplicitInstance& instance) {
  if (instance.n1 < 0 || instance.n2 < 0 || instance.m < 0) {
    throw std::invalid_argument("explicit instance: negative dimension");
  }
  if (instance.entries.empty()) {
    throw std::invalid_argument("explicit instance: no feasible solutions");
  }
  for (size_t k = 0; k < instance.entries.size(); ++k) {
    const ExplicitEntry& e = instance.entries[k];
    if (static_cast<int>(e.x.size()) != instance.n1 ||
        static_cast<int>(e.y.size()) != instance.n2 ||
        static_cast<int>(e.h.size()) != instance.m) {
      throw std::invalid_argument("explicit instance: entry " +
                                  std::to_string(k) + " has wrong dimensions");
    }
    for (size_t l = 0; l < k; ++l) {
      if (instance.entries[l].x == e.x && instance.entries[l].y == e.y) {
        throw std::invalid_argument("explicit instance: entry " +
                                    std::to_string(k) + " repeats entry " +
                                    std::to_string(l));
      }
    }
  }
}

ProblemSpec MakeSpec(const ExplicitInstance& instance) {
  Validate(instance);
  auto data = std::make_shared<const ExplicitInstance>(instance);
  auto find = [data](const BitVector& x, const BitVector& y) {
    for (const ExplicitEntry& e : data->entries) {
      if (e.x == x && e.y == y) return &e;
    }
    return static_cast<const ExplicitEntry*>(nullptr);
  };
  ProblemSpec spec;
  spec.name = instance.name;
  spec.n1 = instance.n1;
  spec.n2 = instance.n2;
  spec.m = instance.m;
  spec.sense = instance.sense;
  spec.objective = [find](const BitVector& x, const BitVector& y) {
    const ExplicitEntry* e = find(x, y);
    if (e == nullptr) {
      throw std::invalid_argument("explicit objective: (x, y) not listed");
    }
    return ObjectiveTerms{e->g, e->h};
  };
  spec.full_feasible = [find](const BitVector& x, const BitVector& y) {
    return find(x, y) != nullptr;
  };
  spec.first_stage_feasible = [data](const BitVector& x) {
    return std::any_of(data->entries.begin(), data->entries.end(),
                       [&x](const ExplicitEntry& e) { return e.x == x; });
  };
  spec.enumerate_first_stage = [data](const ProblemSpec::Visitor& visit) {
    for (const BitVector& x : DistinctFirstStages(*data)) visit(x);
  };
  spec.enumerate_second_stage = [data](const BitVector& x,
                                       const ProblemSpec::Visitor& visit) {
    for (const ExplicitEntry& e : data->entries) {
      if (e.x == x) visit(e.y);
    }
  };
  spec.encoding = std::make_shared<ExplicitEncoding>(data);
  return spec;
}

ExplicitInstance ToyT1() {
  ExplicitInstance t1;
  t1.name = "t1";
  t1.n1 = t1.n2 = t1.m = 1;
  t1.entries = {{{0}, {0}, 2.0, {0.0}},
                {{0}, {1}, 0.0, {3.0}},
                {{1}, {0}, 1.5, {0.0}},
                {{1}, {1}, 0.5, {1.0}}};
  return t1;
}

UncertaintySet ToyT1Uncertainty() { return UncertaintySet::Box({0.0}, {1.0}); }

ExplicitInstance RandomExplicit(int n1, int n2, int m, int max_per_x,
                                std::mt19937_64& rng) {
  if (n1 < 1 || n2 < 0 || m < 1 || n1 + n2 > 20 || max_per_x < 1) {
    throw std::invalid_argument("RandomExplicit: bad dimensions");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> g_dist(0.0, 10.0);
  std::uniform_real_distribution<double> h_dist(-1.0, 4.0);
  ExplicitInstance instance;
  instance.name = "random-explicit";
  instance.n1 = n1;
  instance.n2 = n2;
  instance.m = m;
  const long num_x = 1L << n1;
  const long num_y = 1L << n2;
  std::vector<long> kept;
  for (long mask = 0; mask < num_x; ++mask) {
    if (unit(rng) < 0.7) kept.push_back(mask);
  }
  if (kept.empty()) {
    kept.push_back(std::uniform_int_distribution<long>(0, num_x - 1)(rng));
  }
  for (long xmask : kept) {
    BitVector x(n1);
    for (int i = 0; i < n1; ++i) x[i] = (xmask >> i) & 1;
    const long count = std::uniform_int_distribution<long>(
        1, std::min<long>(max_per_x, num_y))(rng);
    std::vector<long> ys;
    while (static_cast<long>(ys.size()) < count) {
      const long ymask = std::uniform_int_distribution<long>(0, num_y - 1)(rng);
      if (std::find(ys.begin(), ys.end(), ymask) == ys.end()) ys.push_back(ymask);
    }
    for (long ymask : ys) {
      ExplicitEntry e;
      e.x = x;
      e.y.resize(n2);
      for (int j = 0; j < n2; ++j) e.y[j] = (ymask >> j) & 1;
      e.g = g_dist(rng);
      e.h.resize(m);
      for (double& v : e.h) v = h_dist(rng);
      instance.entries.push_back(std::move(e));
    }
  }
  return instance;
}

}  // namespace tworo::problems
