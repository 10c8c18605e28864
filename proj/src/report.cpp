#include "collapse/report.hpp"

#include <sstream>

namespace collapse {

bool ExperimentReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

Json ExperimentReport::to_json() const {
  Json checks_json = Json::array();
  for (const CheckResult& c : checks)
    checks_json.push_back(Json{{"name", c.name},
                               {"pass", c.pass},
                               {"worst_dev", c.worst_dev},
                               {"detail", c.detail}});
  return Json{{"config", config},
              {"checks", std::move(checks_json)},
              {"counterexamples", counterexamples},
              {"master_seed", master_seed},
              {"duration_ms", duration_ms}};
}

namespace {

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report.to_json().dump(2) + "\n";
  std::ostringstream out;
  out << "name,pass,worst_dev,detail\n";
  for (const CheckResult& c : report.checks) {
    out << csv_escape(c.name) << ',' << (c.pass ? "true" : "false") << ','
        << Json(c.worst_dev).dump() << ',' << csv_escape(c.detail.dump()) << '\n';
  }
  return out.str();
}

Json report_reproducible_content(const Json& report_json) {
  Json j = report_json;
  j.erase("duration_ms");
  return j;
}

}  // namespace collapse
