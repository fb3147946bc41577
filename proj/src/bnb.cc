#include "tworo/bnb.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <queue>
#include <stdexcept>

namespace tworo::bnb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  FixationSet fix;
  cg::LowerBoundResult bound;
  double parent_bound = -kInf;
  int depth = 0;
  long sequence = 0;
};

// Smallest bound first, FIFO among equal bounds.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound.mu_star != b.bound.mu_star) {
      return a.bound.mu_star > b.bound.mu_star;
    }
    return a.sequence > b.sequence;
  }
};

// Exposes the container so the minimum open bound can be reported.
class NodeQueue : public std::priority_queue<Node, std::vector<Node>, NodeOrder> {
 public:
  Node PopTop() {
    std::pop_heap(c.begin(), c.end(), comp);
    Node node = std::move(c.back());
    c.pop_back();
    return node;
  }
  double MinBound() const { return empty() ? kInf : top().bound.mu_star; }
};

// Undefined for a zero optimum.
std::optional<double> RootGap(double value, double root) {
  if (value == 0.0) return std::nullopt;
  return 100.0 * (value - root) / std::abs(value);
}

}  // namespace

std::string ToString(Branching b) {
  return b == Branching::kAverage ? "avg" : "opt";
}

Branching BranchingFromString(const std::string& s) {
  if (s == "avg") return Branching::kAverage;
  if (s == "opt") return Branching::kOptimal;
  throw std::invalid_argument("unknown branching strategy '" + s + "'");
}

std::optional<int> SelectBranchVar(const std::vector<double>& x_bar,
                                   const FixationSet& fix) {
  std::optional<int> best;
  double best_distance = kInf;
  for (int i : fix.FreeIndices()) {
    const double distance = std::abs(x_bar.at(i) - 0.5);
    if (distance < best_distance) {
      best = i;
      best_distance = distance;
    }
  }
  return best;
}

cg::SolutionPool WarmStartFilter(const cg::SolutionPool& parent,
                                 const FixationSet& child_fix) {
  cg::SolutionPool child;
  for (const Solution& z : parent) {
    if (child_fix.Admits(z.x)) child.Add(z);
  }
  return child;
}

const FirstStageEvaluator::Entry& FirstStageEvaluator::Evaluate(
    const BitVector& x, const cg::SolutionPool& warm) {
  if (auto it = cache_.find(x); it != cache_.end()) return it->second;
  cg::LowerBoundResult r =
      cg::EvaluateFirstStage(x, spec_, u_, oracle_, warm, counters_, options_);
  if (r.status != cg::BoundStatus::kOptimal) {
    throw std::logic_error("FirstStageEvaluator: Y(x) empty for x in X");
  }
  return cache_.emplace(x, Entry{r.mu_star, std::move(r.pool)}).first->second;
}

std::optional<IncumbentCandidate> MakeIncumbent(
    const cg::LowerBoundResult& node, const std::vector<double>& x_bar,
    const ProblemSpec& spec, FirstStageEvaluator& evaluator,
    const BnbConfig& config) {
  if (node.pool.empty()) return std::nullopt;
  if (node.pool.SharesFirstStage()) {
    return IncumbentCandidate{node.pool[0].x, node.mu_star, node.pool};
  }
  std::vector<BitVector> candidates;
  if (config.round_incumbent) {
    BitVector rounded(x_bar.size());
    for (size_t i = 0; i < x_bar.size(); ++i) rounded[i] = x_bar[i] >= 0.5;
    if (spec.first_stage_feasible(rounded)) candidates.push_back(rounded);
  }
  if (candidates.empty()) {
    // Most frequent pool first stages, first appearance on ties.
    std::vector<std::pair<BitVector, int>> counts;
    for (const Solution& z : node.pool) {
      auto it = std::find_if(counts.begin(), counts.end(),
                             [&z](const auto& c) { return c.first == z.x; });
      if (it == counts.end()) {
        counts.emplace_back(z.x, 1);
      } else {
        ++it->second;
      }
    }
    std::stable_sort(counts.begin(), counts.end(),
                     [](const auto& a, const auto& b) {
                       return a.second > b.second;
                     });
    const int limit = std::min<int>(counts.size(),
                                    std::max(1, config.max_incumbent_candidates));
    for (int k = 0; k < limit; ++k) candidates.push_back(counts[k].first);
  }
  std::optional<IncumbentCandidate> best;
  for (const BitVector& x : candidates) {
    cg::SolutionPool warm;
    for (const Solution& z : node.pool) {
      if (z.x == x) warm.Add(z);
    }
    const FirstStageEvaluator::Entry& e = evaluator.Evaluate(x, warm);
    if (!best || e.value < best->value) {
      best = IncumbentCandidate{x, e.value, e.pool};
    }
  }
  return best;
}

RunReport SolveBnb(const ProblemSpec& spec, const UncertaintySet& u,
                   const Oracle& oracle, const BnbConfig& config) {
  if (spec.sense != Sense::kMinimize) {
    throw std::invalid_argument("SolveBnb: spec must be canonical");
  }
  if (!(config.gap_tolerance > 0.0)) {
    throw std::invalid_argument("SolveBnb: gap tolerance must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  Counters counters;
  FirstStageEvaluator evaluator(spec, u, oracle, &counters, config.cg);
  auto notify = [&config](NodeEvent event) {
    if (config.observer) config.observer(event);
  };

  RunReport report;
  report.problem = spec.name;
  report.algorithm = "bnb";
  report.branching = ToString(config.branching);

  auto finish = [&](RunStatus status) {
    report.status = status;
    report.counters = counters.Snapshot();
    report.seconds = elapsed();
    return report;
  };

  const FixationSet root_fix(spec.n1);
  cg::LowerBoundResult root = cg::LowerBound(
      spec, u, oracle, root_fix, {}, &counters, CgRole::kLowerBound, config.cg);
  if (root.status == cg::BoundStatus::kInfeasible) {
    notify({NodeEvent::Kind::kInfeasible, root_fix, kInf, 0, kInf, -kInf});
    return finish(RunStatus::kInfeasible);
  }
  const double root_bound = root.mu_star;
  report.root_bound = spec.ReportedValue(root_bound);

  NodeQueue open;
  long sequence = 0;
  open.push(Node{root_fix, std::move(root), -kInf, 0, sequence++});

  std::optional<IncumbentCandidate> incumbent;
  auto incumbent_value = [&incumbent] {
    return incumbent ? incumbent->value : kInf;
  };
  const bool parallel = config.threads > 1 && oracle.thread_safe();
  bool limit_hit = false;

  while (!open.empty()) {
    if ((config.node_limit > 0 && counters.Snapshot().nodes >= config.node_limit) ||
        (config.time_limit_seconds > 0.0 && elapsed() >= config.time_limit_seconds)) {
      limit_hit = true;
      break;
    }
    Node node = open.PopTop();
    if (node.bound.mu_star >= incumbent_value() - config.gap_tolerance) {
      // Best-first: every remaining node is at least as bad.
      notify({NodeEvent::Kind::kPruned, node.fix, node.bound.mu_star,
              node.depth, open.MinBound(), node.parent_bound});
      while (!open.empty()) {
        Node rest = open.PopTop();
        notify({NodeEvent::Kind::kPruned, rest.fix, rest.bound.mu_star,
                rest.depth, open.MinBound(), rest.parent_bound});
      }
      break;
    }
    counters.AddNode();
    notify({NodeEvent::Kind::kProcessed, node.fix, node.bound.mu_star,
            node.depth, open.MinBound(), node.parent_bound});

    const std::vector<double> x_bar =
        config.branching == Branching::kAverage
            ? cg::AverageFirstStage(node.bound.pool)
            : cg::OptimalConvexCombination(node.bound.pool, u).x_bar;
    std::optional<IncumbentCandidate> candidate =
        MakeIncumbent(node.bound, x_bar, spec, evaluator, config);
    if (candidate && candidate->value < incumbent_value()) {
      incumbent = std::move(candidate);
    }
    if (node.bound.mu_star >= incumbent_value() - config.gap_tolerance) {
      continue;
    }
    const std::optional<int> branch = SelectBranchVar(x_bar, node.fix);
    if (!branch) continue;

    const FixationSet fix0 = node.fix.With(*branch, Fix::kZero);
    const FixationSet fix1 = node.fix.With(*branch, Fix::kOne);
    auto bound_child = [&](const FixationSet& fix) {
      return cg::LowerBound(spec, u, oracle, fix,
                            WarmStartFilter(node.bound.pool, fix), &counters,
                            CgRole::kLowerBound, config.cg);
    };
    cg::LowerBoundResult child0, child1;
    if (parallel) {
      auto f1 = std::async(std::launch::async, bound_child, std::cref(fix1));
      child0 = bound_child(fix0);
      child1 = f1.get();
    } else {
      child0 = bound_child(fix0);
      child1 = bound_child(fix1);
    }
    for (auto* child : {&child0, &child1}) {
      const FixationSet& fix = child == &child0 ? fix0 : fix1;
      if (child->status == cg::BoundStatus::kInfeasible) {
        notify({NodeEvent::Kind::kInfeasible, fix, kInf, node.depth + 1, kInf,
                node.bound.mu_star});
        continue;
      }
      const double tolerance = 1e-6 * (1.0 + std::abs(node.bound.mu_star));
      if (child->mu_star < node.bound.mu_star - tolerance) {
        throw std::logic_error("SolveBnb: child bound below parent bound");
      }
      open.push(Node{fix, std::move(*child), node.bound.mu_star,
                     node.depth + 1, sequence++});
    }
  }

  if (incumbent) {
    report.value = spec.ReportedValue(incumbent->value);
    report.incumbent = incumbent->x;
    report.pool = incumbent->pool.solutions();
    report.root_gap = RootGap(incumbent->value, root_bound);
  }
  if (limit_hit) {
    const double bound = std::min(open.MinBound(), incumbent_value());
    report.bound = spec.ReportedValue(bound);
    return finish(RunStatus::kLimitReached);
  }
  if (!incumbent) {
    throw std::logic_error("SolveBnb: search ended without an incumbent");
  }
  report.bound = report.value;
  return finish(RunStatus::kOptimal);
}

}  // namespace tworo::bnb
