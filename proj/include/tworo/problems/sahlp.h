#ifndef TWORO_PROBLEMS_SAHLP_H_
#define TWORO_PROBLEMS_SAHLP_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tworo/mip.h"
#include "tworo/model.h"

namespace tworo::problems {

// Uncapacitated single-allocation hub location. First stage: hubs x_k.
// Second stage: allocations y[i*n + k] = 1 iff node i is served by hub k.
// Scenarios are flows w[i*n + j].
struct SahlpInstance {
  std::string name = "sahlp";
  int n = 0;
  std::vector<double> distance;        // n x n, row-major, zero diagonal
  std::vector<double> flow_nominal;    // w̄
  std::vector<double> flow_deviation;  // ŵ
  std::vector<double> setup;           // per node
  double collection = 3.0;
  double transfer = 0.75;
  double distribution = 2.0;
  double gamma = 0.0;

  double d(int i, int j) const { return distance[static_cast<size_t>(i) * n + j]; }

  bool operator==(const SahlpInstance&) const = default;
};

void Validate(const SahlpInstance& instance);

// Total cost for flows w: setup + collection/distribution + transfer, with
// hub(i) read from the allocation. Throws std::invalid_argument if an
// allocation is not single or targets a closed hub.
double SahlpCost(const SahlpInstance& instance, const BitVector& x,
                 const BitVector& y, const std::vector<double>& w);

// g = Σ f_k x_k; h_ij = χ d(i,hub i) + δ d(j,hub j) + α d(hub i,hub j).
// X excludes the empty hub set.
ProblemSpec MakeSpec(const SahlpInstance& instance);

// { w̄ + diag(ŵ) δ : δ ∈ [0,1]^{n²}, Σδ <= Γ }.
UncertaintySet MakeUncertainty(const SahlpInstance& instance);

// Exhaustive search over allocations with partial-cost pruning. Requires
// nonnegative data and flows; refuses n above the cap.
class SahlpEnumerationOracle : public Oracle {
 public:
  explicit SahlpEnumerationOracle(SahlpInstance instance, int max_nodes = 8);

  std::optional<Decision> Solve(const Scenario& c,
                                const FixationSet& fix) const override;

 private:
  SahlpInstance instance_;
};

// Flow-based MIP oracle solved with the in-house MIP code.
std::unique_ptr<Oracle> MakeSahlpFlowOracle(const SahlpInstance& instance,
                                            mip::MipLimits limits = {});

struct SahlpGeneratorOptions {
  int n = 5;
  // Γ = floor(gamma_fraction n²).
  double gamma_fraction = 0.1;
  // ŵ_ij ~ U[0, deviation_multiplier w̄_ij].
  double deviation_multiplier = 1.0;
  std::uint64_t seed = 1;
  // CAB-style factors χ = δ = 1 and α = cab_transfer instead of 3, 0.75, 2.
  bool cab_costs = false;
  double cab_transfer = 0.2;
};

// Nodes uniform in the unit square with Euclidean distances, w̄_ij ~ U[1,10]
// off the diagonal, setup 15 ln(O_k).
SahlpInstance GenerateSahlp(const SahlpGeneratorOptions& options);

}  // namespace tworo::problems

#endif  // TWORO_PROBLEMS_SAHLP_H_
