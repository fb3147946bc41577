#include "tworo/instance_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "tworo/linear_encoding.h"

namespace tworo {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// JSON has no infinities; null stands for the unbounded side.
json Bounds(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return out;
}

std::vector<double> ReadBounds(const json& j, double missing) {
  std::vector<double> v;
  for (const json& x : j) v.push_back(x.is_null() ? missing : x.get<double>());
  return v;
}

json Bits(const BitVector& v) {
  json out = json::array();
  for (auto b : v) out.push_back(static_cast<int>(b));
  return out;
}

BitVector ReadBits(const json& j) {
  BitVector v;
  for (const json& b : j) {
    const int bit = b.get<int>();
    if (bit != 0 && bit != 1) throw std::invalid_argument("expected a 0/1 entry");
    v.push_back(static_cast<std::uint8_t>(bit));
  }
  return v;
}

std::string SenseName(Sense s) { return s == Sense::kMinimize ? "minimize" : "maximize"; }

Sense SenseFromName(const std::string& s) {
  if (s == "minimize") return Sense::kMinimize;
  if (s == "maximize") return Sense::kMaximize;
  throw std::invalid_argument("unknown sense '" + s + "'");
}

json ExplicitToJson(const problems::ExplicitInstance& in) {
  json entries = json::array();
  for (const problems::ExplicitEntry& e : in.entries) {
    entries.push_back({{"x", Bits(e.x)}, {"y", Bits(e.y)}, {"g", e.g}, {"h", e.h}});
  }
  return {{"name", in.name}, {"n1", in.n1},        {"n2", in.n2},
          {"m", in.m},       {"sense", SenseName(in.sense)}, {"entries", entries}};
}

problems::ExplicitInstance ExplicitFromJson(const json& j) {
  problems::ExplicitInstance in;
  in.name = j.at("name").get<std::string>();
  in.n1 = j.at("n1").get<int>();
  in.n2 = j.at("n2").get<int>();
  in.m = j.at("m").get<int>();
  in.sense = SenseFromName(j.at("sense").get<std::string>());
  for (const json& e : j.at("entries")) {
    in.entries.push_back({ReadBits(e.at("x")), ReadBits(e.at("y")),
                          e.at("g").get<double>(),
                          e.at("h").get<std::vector<double>>()});
  }
  problems::Validate(in);
  return in;
}

json SahlpToJson(const problems::SahlpInstance& in) {
  return {{"name", in.name},
          {"n", in.n},
          {"distance", in.distance},
          {"flow_nominal", in.flow_nominal},
          {"flow_deviation", in.flow_deviation},
          {"setup", in.setup},
          {"collection", in.collection},
          {"transfer", in.transfer},
          {"distribution", in.distribution},
          {"gamma", in.gamma}};
}

problems::SahlpInstance SahlpFromJson(const json& j) {
  problems::SahlpInstance in;
  in.name = j.at("name").get<std::string>();
  in.n = j.at("n").get<int>();
  in.distance = j.at("distance").get<std::vector<double>>();
  in.flow_nominal = j.at("flow_nominal").get<std::vector<double>>();
  in.flow_deviation = j.at("flow_deviation").get<std::vector<double>>();
  in.setup = j.at("setup").get<std::vector<double>>();
  in.collection = j.at("collection").get<double>();
  in.transfer = j.at("transfer").get<double>();
  in.distribution = j.at("distribution").get<double>();
  in.gamma = j.at("gamma").get<double>();
  problems::Validate(in);
  return in;
}

json CbToJson(const problems::CbInstance& in) {
  return {{"name", in.name},
          {"n", in.n},
          {"m", in.m},
          {"cost", in.cost},
          {"profit", in.profit},
          {"loading", in.loading},
          {"budget", in.budget},
          {"early_loan", in.early_loan},
          {"late_loan", in.late_loan},
          {"loan_rate", in.loan_rate},
          {"late_premium", in.late_premium},
          {"defer_factor", in.defer_factor}};
}

problems::CbInstance CbFromJson(const json& j) {
  problems::CbInstance in;
  in.name = j.at("name").get<std::string>();
  in.n = j.at("n").get<int>();
  in.m = j.at("m").get<int>();
  in.cost = j.at("cost").get<std::vector<double>>();
  in.profit = j.at("profit").get<std::vector<double>>();
  in.loading = j.at("loading").get<std::vector<double>>();
  in.budget = j.at("budget").get<double>();
  in.early_loan = j.at("early_loan").get<double>();
  in.late_loan = j.at("late_loan").get<double>();
  in.loan_rate = j.at("loan_rate").get<double>();
  in.late_premium = j.at("late_premium").get<double>();
  in.defer_factor = j.at("defer_factor").get<double>();
  problems::Validate(in);
  return in;
}

}  // namespace

std::string ToString(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kExplicit:
      return "explicit";
    case ProblemKind::kSahlp:
      return "sahlp";
    case ProblemKind::kCapitalBudgeting:
      return "cb";
  }
  return "unknown";
}

ProblemKind ProblemKindFromString(const std::string& s) {
  if (s == "explicit") return ProblemKind::kExplicit;
  if (s == "sahlp") return ProblemKind::kSahlp;
  if (s == "cb") return ProblemKind::kCapitalBudgeting;
  throw std::invalid_argument("unknown problem kind '" + s + "'");
}

ProblemKind ProblemBundle::kind() const {
  return static_cast<ProblemKind>(instance.index());
}

ProblemSpec ProblemBundle::Spec() const {
  return std::visit([](const auto& in) { return problems::MakeSpec(in); },
                    instance);
}

ProblemSpec ProblemBundle::CanonicalSpec() const { return Canonicalize(Spec()); }

std::unique_ptr<Oracle> ProblemBundle::MakeOracle() const {
  switch (kind()) {
    case ProblemKind::kExplicit:
      return std::make_unique<EnumerationOracle>(CanonicalSpec());
    case ProblemKind::kSahlp:
      return problems::MakeSahlpFlowOracle(std::get<problems::SahlpInstance>(instance));
    case ProblemKind::kCapitalBudgeting:
      return std::make_unique<EncodingOracle>(CanonicalSpec());
  }
  throw std::logic_error("MakeOracle: unknown problem kind");
}

std::unique_ptr<Oracle> ProblemBundle::MakeReferenceOracle() const {
  if (kind() == ProblemKind::kSahlp) {
    return std::make_unique<problems::SahlpEnumerationOracle>(
        std::get<problems::SahlpInstance>(instance));
  }
  return std::make_unique<EnumerationOracle>(CanonicalSpec());
}

ProblemBundle MakeBundle(problems::ExplicitInstance instance, UncertaintySet u) {
  problems::Validate(instance);
  if (u.m() != instance.m) {
    throw std::invalid_argument("explicit bundle: uncertainty dimension " +
                                std::to_string(u.m()) + " != m = " +
                                std::to_string(instance.m));
  }
  return ProblemBundle{std::move(instance), std::move(u)};
}

ProblemBundle MakeBundle(problems::SahlpInstance instance) {
  UncertaintySet u = problems::MakeUncertainty(instance);
  return ProblemBundle{std::move(instance), std::move(u)};
}

ProblemBundle MakeBundle(problems::CbInstance instance) {
  UncertaintySet u = problems::MakeUncertainty(instance);
  return ProblemBundle{std::move(instance), std::move(u)};
}

json ToJson(const UncertaintySet& u) {
  switch (u.kind()) {
    case UncertaintySet::Kind::kBudgeted: {
      std::vector<double> w_hat(u.m());
      for (int i = 0; i < u.m(); ++i) w_hat[i] = u.map_at(i, i);
      return {{"kind", "budgeted"}, {"c_bar", u.c_bar()}, {"w_hat", w_hat},
              {"gamma", u.gamma()}};
    }
    case UncertaintySet::Kind::kBox:
      return {{"kind", "box"}, {"lower", u.delta_lower()}, {"upper", u.delta_upper()}};
    case UncertaintySet::Kind::kGeneral: {
      json rows = json::array();
      for (const LinearRow& row : u.rows()) {
        rows.push_back({{"coefficients", row.coefficients}, {"rhs", row.rhs}});
      }
      return {{"kind", "general"},
              {"c_bar", u.c_bar()},
              {"p", u.p()},
              {"deviation_map", u.deviation_map()},
              {"delta_lower", Bounds(u.delta_lower())},
              {"delta_upper", Bounds(u.delta_upper())},
              {"rows", rows}};
    }
  }
  throw std::logic_error("ToJson: unknown uncertainty kind");
}

UncertaintySet UncertaintyFromJson(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "budgeted") {
    return UncertaintySet::Budgeted(j.at("c_bar").get<std::vector<double>>(),
                                    j.at("w_hat").get<std::vector<double>>(),
                                    j.at("gamma").get<double>());
  }
  if (kind == "box") {
    return UncertaintySet::Box(j.at("lower").get<std::vector<double>>(),
                               j.at("upper").get<std::vector<double>>());
  }
  if (kind == "general") {
    std::vector<LinearRow> rows;
    for (const json& row : j.at("rows")) {
      rows.push_back({row.at("coefficients").get<std::vector<double>>(),
                      row.at("rhs").get<double>()});
    }
    return UncertaintySet(j.at("c_bar").get<std::vector<double>>(),
                          j.at("deviation_map").get<std::vector<double>>(),
                          j.at("p").get<int>(),
                          ReadBounds(j.at("delta_lower"), -kInf),
                          ReadBounds(j.at("delta_upper"), kInf), std::move(rows));
  }
  throw std::invalid_argument("unknown uncertainty kind '" + kind + "'");
}

json ToJson(const ProblemBundle& bundle) {
  json j;
  j["format_version"] = kInstanceFormatVersion;
  j["problem"] = ToString(bundle.kind());
  std::visit(
      [&j, &bundle](const auto& in) {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, problems::ExplicitInstance>) {
          j["instance"] = ExplicitToJson(in);
          j["uncertainty"] = ToJson(bundle.uncertainty);
        } else if constexpr (std::is_same_v<T, problems::SahlpInstance>) {
          j["instance"] = SahlpToJson(in);
        } else {
          j["instance"] = CbToJson(in);
        }
      },
      bundle.instance);
  return j;
}

ProblemBundle BundleFromJson(const json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kInstanceFormatVersion) {
      throw std::invalid_argument("unsupported instance format_version " +
                                  std::to_string(version));
    }
    switch (ProblemKindFromString(j.at("problem").get<std::string>())) {
      case ProblemKind::kExplicit:
        return MakeBundle(ExplicitFromJson(j.at("instance")),
                          UncertaintyFromJson(j.at("uncertainty")));
      case ProblemKind::kSahlp:
        return MakeBundle(SahlpFromJson(j.at("instance")));
      case ProblemKind::kCapitalBudgeting:
        return MakeBundle(CbFromJson(j.at("instance")));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  }
  throw std::logic_error("BundleFromJson: unreachable");
}

ProblemBundle LoadBundle(const std::string& path_or_name) {
  if (path_or_name == "t1") {
    return MakeBundle(problems::ToyT1(), problems::ToyT1Uncertainty());
  }
  return BundleFromJson(ReadJsonFile(path_or_name));
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteJsonFile(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace tworo
