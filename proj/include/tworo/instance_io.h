#ifndef TWORO_INSTANCE_IO_H_
#define TWORO_INSTANCE_IO_H_

#include <memory>
#include <string>
#include <variant>

#include "json.hpp"

#include "tworo/model.h"
#include "tworo/problems/capital_budgeting.h"
#include "tworo/problems/explicit.h"
#include "tworo/problems/sahlp.h"

namespace tworo {

inline constexpr int kInstanceFormatVersion = 1;

enum class ProblemKind { kExplicit, kSahlp, kCapitalBudgeting };

std::string ToString(ProblemKind kind);
ProblemKind ProblemKindFromString(const std::string& s);

// A problem instance together with its uncertainty set.
struct ProblemBundle {
  std::variant<problems::ExplicitInstance, problems::SahlpInstance,
               problems::CbInstance>
      instance;
  UncertaintySet uncertainty;

  ProblemKind kind() const;
  // As stated (CB maximizes).
  ProblemSpec Spec() const;
  ProblemSpec CanonicalSpec() const;
  // Oracle used by the solvers: enumeration for explicit instances, the
  // flow MIP for hub location, the MIP for capital budgeting.
  std::unique_ptr<Oracle> MakeOracle() const;
  // Independent enumeration oracle for cross-checks.
  std::unique_ptr<Oracle> MakeReferenceOracle() const;
};

ProblemBundle MakeBundle(problems::ExplicitInstance instance, UncertaintySet u);
ProblemBundle MakeBundle(problems::SahlpInstance instance);
ProblemBundle MakeBundle(problems::CbInstance instance);

nlohmann::json ToJson(const UncertaintySet& u);
UncertaintySet UncertaintyFromJson(const nlohmann::json& j);

// Explicit instances carry their uncertainty set; hub location and capital
// budgeting derive it from the instance data.
nlohmann::json ToJson(const ProblemBundle& bundle);
ProblemBundle BundleFromJson(const nlohmann::json& j);

// "t1" names the built-in toy; anything else is a file path. Throws
// std::invalid_argument on unreadable or malformed input.
ProblemBundle LoadBundle(const std::string& path_or_name);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteJsonFile(const nlohmann::json& j, const std::string& path);

}  // namespace tworo

#endif  // TWORO_INSTANCE_IO_H_
