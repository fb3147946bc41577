#ifndef TWORO_CLI_H_
#define TWORO_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tworo/bnb.h"
#include "tworo/instance_io.h"
#include "tworo/report.h"

namespace tworo::cli {

enum class Algorithm { kBnb, kCcg, kLowerBoundOnly, kBruteForce };

std::string ToString(Algorithm a);
Algorithm AlgorithmFromString(const std::string& s);

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitLimit = 3;
inline constexpr int kExitBadInput = 4;

// Rejected configuration or instance data; maps to kExitBadInput.
class BadInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeneratorParams {
  ProblemKind problem = ProblemKind::kSahlp;
  int n = 5;
  // Risk factors (capital budgeting) or scenario dimension (explicit).
  int m = 2;
  double gamma_fraction = 0.1;
  double deviation_multiplier = 1.0;
  std::uint64_t seed = 1;
};

// Throws BadInput when a parameter is out of range.
void Validate(const GeneratorParams& params);

// Random instance of the requested kind. Explicit instances get n first-stage
// and n second-stage variables and a budgeted set with Γ = fraction · m.
ProblemBundle Generate(const GeneratorParams& params);

struct RunConfig {
  std::string verb = "solve";
  // Instance path or "t1"; empty means generate from params.
  std::string instance;
  GeneratorParams params;
  Algorithm algorithm = Algorithm::kBnb;
  bnb::Branching branching = bnb::Branching::kAverage;
  double time_limit_seconds = 0.0;
  long node_limit = 0;
  int threads = 1;
  // Sampled scenarios for the policy gap.
  int scenarios = 10;
  // evaluate: a saved run report whose pool is evaluated.
  std::string pool_path;
  // verify: number of random instances.
  int count = 20;
  std::string out;
};

ProblemBundle LoadOrGenerate(const RunConfig& config);

// Runs one algorithm and fills the metrics the run can produce.
RunReport Solve(const ProblemBundle& bundle, const RunConfig& config);

// Policy gap of a pool over config.scenarios sampled scenarios.
bench::PolicyGapResult EvaluatePool(const ProblemBundle& bundle,
                                    const std::vector<Solution>& pool,
                                    const BitVector& x, std::uint64_t seed,
                                    int scenarios);

// Values of the exact solvers on one instance, canonical sense.
struct Agreement {
  double bnb_average = 0.0;
  double bnb_optimal = 0.0;
  double ccg = 0.0;
  double brute = 0.0;
  // Root lower bound of the average-branching run.
  double root_bound = 0.0;
  std::vector<CcgIterate> ccg_history;

  double Spread() const;
};

Agreement CheckAgreement(const ProblemBundle& bundle);

// Parses argv, runs the verb and writes the JSON result (or a JSON error
// object) to --out or `out`. Returns the exit code.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tworo::cli

#endif  // TWORO_CLI_H_
