#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lacvar {

enum class ScenarioKind {
  StrongPP,
  Weak11,
  H1L1,
  LinfBmo,
  L2Multiplier,
  WeightedPP,
  WeightedWeak11,
  VectorValued,
  RefineDomination,
  DrCondition,
  FourierBound,
  IndicatorIdentity,
};

ScenarioKind scenario_kind_from_string(const std::string& name);
const char* to_string(ScenarioKind kind);
std::vector<ScenarioKind> all_scenario_kinds();

/// A validated scenario: `config` is the user document merged over the
/// defaults for `kind`, so it records every parameter the run uses.
struct Scenario {
  ScenarioKind kind = ScenarioKind::StrongPP;
  nlohmann::ordered_json config;
};

/// Throws ScenarioInvalid for unknown keys, wrong types, or a "kind" entry
/// that disagrees with `kind`.
Scenario make_scenario(ScenarioKind kind, const nlohmann::json& config = nlohmann::json::object());
Scenario load_scenario(ScenarioKind kind, const std::string& path);

struct CaseResult {
  std::string id;
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// Same quantities with the grid step halved; NaN when not computed.
  double lhs_fine;
  double rhs_fine;
  double ratio_fine;
  /// |ratio_fine - ratio| / ratio (0 when both vanish).
  double change;
  std::vector<std::pair<std::string, double>> extra;

  CaseResult();
};

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  /// How value is compared with threshold: "<=", ">=", "==".
  std::string relation = "<=";
};

struct VerificationReport {
  ScenarioKind kind = ScenarioKind::StrongPP;
  nlohmann::ordered_json scenario;
  std::uint64_t seed = 0;
  std::vector<CaseResult> cases;
  double sup_ratio = 0.0;
  double sup_ratio_fine;
  double refinement_change;
  /// Scenario-level measured constants (sup I, sup Q, A_p estimates, ...).
  std::vector<std::pair<std::string, double>> constants;
  std::vector<Check> checks;
  bool pass = false;
  double seconds = 0.0;

  VerificationReport();
};

inline constexpr const char* kReportSchema = "lacvar-report/1";

VerificationReport run_scenario(const Scenario& scenario);

enum class ReportFormat { Json, Csv };

/// Deterministic serialization. Wall-clock time is left out unless
/// `include_timing` is set, so identical runs give identical bytes.
std::string emit_report(const VerificationReport& report, ReportFormat format,
                        bool include_timing = false);

}  // namespace lacvar
