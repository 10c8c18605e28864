#ifndef COLLAPSE_REPORT_HPP
#define COLLAPSE_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "collapse/serialize.hpp"

namespace collapse {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst_dev = 0.0;
  Json detail = Json::object();
};

/// Structured record of a campaign. Everything except duration_ms is a pure
/// function of (config, master_seed); duration is wall clock and excluded
/// from reproducibility comparisons.
struct ExperimentReport {
  Json config = Json::object();
  std::vector<CheckResult> checks;
  Json counterexamples = Json::array();
  std::uint64_t master_seed = 0;
  std::int64_t duration_ms = 0;

  bool all_pass() const;
  Json to_json() const;
};

enum class ReportFormat { Json, Csv };

/// Deterministic serialization; same report gives identical bytes.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

/// Report JSON with the wall-clock field removed, for byte comparisons.
Json report_reproducible_content(const Json& report_json);

}  // namespace collapse

#endif
