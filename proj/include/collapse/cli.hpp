#ifndef COLLAPSE_CLI_HPP
#define COLLAPSE_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "collapse/report.hpp"
#include "collapse/update_rules.hpp"

namespace collapse {

enum class Command { Measure, CompareRules, P4Scan, DilationCheck, MinDisturbance, Repeatability };

std::string to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

/// Generator spec for random problem instances: --gen dim=N,rank=R,mults=a:b:c.
struct GenSpec {
  int dim = 0;
  int rank = 0;            ///< 0 means full rank
  std::vector<int> mults;  ///< empty means nondegenerate (all ones)
};

GenSpec parse_gen_spec(const std::string& text);

struct ExperimentConfig {
  Command command = Command::Measure;
  std::optional<std::string> input_path;  ///< file XOR gen
  std::optional<GenSpec> gen;
  UpdateRule rule = UpdateRule::Luders;
  std::uint64_t master_seed = 0;
  long trials = 1000;
  long probes = 1000;
  int dims_lo = 2;  ///< scan campaigns draw dims from [dims_lo, dims_hi]
  int dims_hi = 8;
  std::optional<double> tol;  ///< overrides the campaign's default tolerance
  std::optional<std::string> out_path;
  ReportFormat format = ReportFormat::Json;
};

/// Echoed into every report; round-trips losslessly so a report can be
/// reproduced from its own config.
Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

/// Dispatch to the named campaign. Throws ConfigError / IoError /
/// ValidationError; check violations are reported, not thrown.
ExperimentReport run(const ExperimentConfig& config);

/// Exit codes: 0 all checks pass, 1 check violation, 2 config error,
/// 3 I/O or parse error, 4 input fails type invariants.
int cli_main(int argc, const char* const* argv);

}  // namespace collapse

#endif
