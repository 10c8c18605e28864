#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "collapse/cli.hpp"
#include "collapse/serialize.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace collapse;
using namespace collapse::testing;

namespace {

struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& name, const std::string& contents)
      : path(std::filesystem::temp_directory_path() / name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

std::string sigma_z_plus_problem() {
  const Json j{{"state", pure_to_json(PureState(plus_state()))},
               {"observable", observable_to_json(Observable(sigma_z()))}};
  return j.dump();
}

std::string worked_problem() {
  const Json j{{"state", pure_to_json(PureState(uniform_three_state()))},
               {"observable", observable_to_json(Observable(degenerate_observable()))}};
  return j.dump();
}

const CheckResult& find_check(const ExperimentReport& report, const std::string& name) {
  for (const CheckResult& c : report.checks)
    if (c.name == name) return c;
  REQUIRE_MESSAGE(false, ("missing check " + name).c_str());
  static CheckResult dummy;
  return dummy;
}

int run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"collapse-lab"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("parse_gen_spec reads dim, rank and multiplicities") {
  const GenSpec spec = parse_gen_spec("dim=5,rank=2,mults=2:2:1");
  CHECK(spec.dim == 5);
  CHECK(spec.rank == 2);
  CHECK(spec.mults == std::vector<int>{2, 2, 1});

  CHECK_THROWS_AS(parse_gen_spec("rank=2"), ConfigError);
  CHECK_THROWS_AS(parse_gen_spec("dim=abc"), ConfigError);
  CHECK_THROWS_AS(parse_gen_spec("dim=3,bogus=1"), ConfigError);
}

TEST_CASE("config JSON round trips losslessly") {
  ExperimentConfig config;
  config.command = Command::MinDisturbance;
  config.gen = GenSpec{4, 2, {2, 2}};
  config.rule = UpdateRule::VonNeumann;
  config.master_seed = 0xFEEDFACE;
  config.trials = 17;
  config.probes = 23;
  config.dims_lo = 3;
  config.dims_hi = 6;
  config.tol = 1e-9;
  config.format = ReportFormat::Csv;

  const Json echo = config_to_json(config);
  const ExperimentConfig back = config_from_json(echo);
  CHECK(config_to_json(back).dump() == echo.dump());
}

TEST_CASE("measure reports the even sigma_z distribution and a reproducible outcome") {
  TempFile file("collapse_test_measure.json", sigma_z_plus_problem());
  ExperimentConfig config;
  config.command = Command::Measure;
  config.input_path = file.path.string();
  config.master_seed = 42;
  config.trials = 1;

  const ExperimentReport report = run(config);
  CHECK(report.all_pass());

  const CheckResult& bornc = find_check(report, "born_normalized");
  const Json& dist = bornc.detail.at("distribution");
  REQUIRE(dist.size() == 2);
  CHECK(dist.at(0).at(0).get<double>() == doctest::Approx(-1.0));
  CHECK(dist.at(0).at(1).get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist.at(1).at(1).get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  const ExperimentReport again = run(config);
  CHECK(find_check(again, "sampled_outcome").detail.at("eigenvalue") ==
        find_check(report, "sampled_outcome").detail.at("eigenvalue"));
}

TEST_CASE("measure under the vn rule reports a repeatable post-state") {
  TempFile file("collapse_test_measure_vn.json", worked_problem());
  ExperimentConfig config;
  config.command = Command::Measure;
  config.input_path = file.path.string();
  config.rule = UpdateRule::VonNeumann;
  config.master_seed = 3;
  const ExperimentReport report = run(config);
  CHECK(report.all_pass());
}

TEST_CASE("compare-rules quantifies the worked disagreement") {
  TempFile file("collapse_test_compare.json", worked_problem());
  ExperimentConfig config;
  config.command = Command::CompareRules;
  config.input_path = file.path.string();
  config.master_seed = 5;

  const ExperimentReport report = run(config);
  CHECK(report.all_pass());

  const CheckResult& diff = find_check(report, "rules_difference");
  CHECK(diff.worst_dev == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(diff.detail.at("entry") == Json::array({0, 1}));
  CHECK(diff.detail.at("vn_applicable") == false);
  CHECK(find_check(report, "p4_equals_luders").pass);
}

TEST_CASE("p4-scan at desk scale passes with no counterexamples") {
  ExperimentConfig config;
  config.command = Command::P4Scan;
  config.master_seed = 11;
  config.trials = 25;
  config.dims_lo = 2;
  config.dims_hi = 5;
  const ExperimentReport report = run(config);
  CHECK(report.all_pass());
  CHECK(report.counterexamples.empty());
  const Json scan = find_check(report, "p4_positive").detail.at("scan");
  CHECK(scan.at("trials") == 100);
}

TEST_CASE("dilation-check campaign passes") {
  ExperimentConfig config;
  config.command = Command::DilationCheck;
  config.master_seed = 12;
  config.trials = 30;
  config.dims_lo = 2;
  config.dims_hi = 5;
  const ExperimentReport report = run(config);
  CHECK(report.all_pass());
  CHECK(find_check(report, "measurement_raises_rank").detail.at("output_rank") == 2);
}

TEST_CASE("min-disturbance campaign passes") {
  ExperimentConfig config;
  config.command = Command::MinDisturbance;
  config.master_seed = 13;
  config.trials = 25;
  config.probes = 50;
  config.dims_lo = 2;
  config.dims_hi = 5;
  const ExperimentReport report = run(config);
  CHECK(report.all_pass());
}

TEST_CASE("min-disturbance accepts a fixed pure instance") {
  TempFile file("collapse_test_mind.json", worked_problem());
  ExperimentConfig config;
  config.command = Command::MinDisturbance;
  config.input_path = file.path.string();
  config.master_seed = 15;
  config.trials = 5;
  config.probes = 100;
  CHECK(run(config).all_pass());

  // a mixed state cannot serve as the pre-measurement vector here
  const Json mixed{{"state", density_to_json(DensityOperator(Matrix::Identity(2, 2) / 2.0))},
                   {"observable", observable_to_json(Observable(sigma_z()))}};
  TempFile bad("collapse_test_mind_bad.json", mixed.dump());
  config.input_path = bad.path.string();
  CHECK_THROWS_AS(run(config), ValidationError);
}

TEST_CASE("dilation-check accepts a fixed instance and p4-scan refuses one") {
  TempFile file("collapse_test_dil.json", worked_problem());
  ExperimentConfig config;
  config.command = Command::DilationCheck;
  config.input_path = file.path.string();
  config.master_seed = 16;
  CHECK(run(config).all_pass());

  config.command = Command::P4Scan;
  CHECK_THROWS_AS(run(config), ConfigError);
}

TEST_CASE("repeatability campaign passes on random instances and fixed ones") {
  ExperimentConfig config;
  config.command = Command::Repeatability;
  config.master_seed = 14;
  config.trials = 50;
  CHECK(run(config).all_pass());

  config.gen = GenSpec{4, 2, {2, 1, 1}};
  CHECK(run(config).all_pass());
}

TEST_CASE("every campaign reproduces byte-identically from its echoed config") {
  TempFile file("collapse_test_repro.json", worked_problem());
  std::vector<ExperimentConfig> configs;

  ExperimentConfig measure;
  measure.command = Command::Measure;
  measure.input_path = file.path.string();
  measure.master_seed = 21;
  configs.push_back(measure);

  ExperimentConfig compare = measure;
  compare.command = Command::CompareRules;
  configs.push_back(compare);

  ExperimentConfig scan;
  scan.command = Command::P4Scan;
  scan.master_seed = 22;
  scan.trials = 10;
  scan.dims_lo = 2;
  scan.dims_hi = 4;
  configs.push_back(scan);

  ExperimentConfig dilation = scan;
  dilation.command = Command::DilationCheck;
  configs.push_back(dilation);

  ExperimentConfig disturbance = scan;
  disturbance.command = Command::MinDisturbance;
  disturbance.probes = 20;
  configs.push_back(disturbance);

  ExperimentConfig repeat = scan;
  repeat.command = Command::Repeatability;
  configs.push_back(repeat);

  for (const ExperimentConfig& config : configs) {
    const ExperimentReport first = run(config);
    const ExperimentReport second = run(config_from_json(first.config));
    CHECK(report_reproducible_content(first.to_json()).dump() ==
          report_reproducible_content(second.to_json()).dump());
  }
}

TEST_CASE("campaign parallelism does not change report bytes") {
  ExperimentConfig config;
  config.command = Command::DilationCheck;
  config.master_seed = 33;
  config.trials = 20;
  config.dims_lo = 2;
  config.dims_hi = 4;

  setenv("COLLAPSE_LAB_THREADS", "1", 1);
  const ExperimentReport serial = run(config);
  setenv("COLLAPSE_LAB_THREADS", "4", 1);
  const ExperimentReport parallel = run(config);
  unsetenv("COLLAPSE_LAB_THREADS");
  CHECK(report_reproducible_content(serial.to_json()).dump() ==
        report_reproducible_content(parallel.to_json()).dump());
}

TEST_CASE("configs with both input and gen are rejected") {
  ExperimentConfig config;
  config.command = Command::Measure;
  config.input_path = "x.json";
  config.gen = GenSpec{2, 0, {}};
  CHECK_THROWS_AS(run(config), ConfigError);

  ExperimentConfig neither;
  neither.command = Command::Measure;
  CHECK_THROWS_AS(run(neither), ConfigError);
}

TEST_CASE("cli_main maps error classes to distinct exit codes") {
  // bad flag
  CHECK(run_cli({"measure", "--bogus"}) == 2);
  // unknown rule
  CHECK(run_cli({"measure", "--gen", "dim=2", "--rule", "nonsense"}) == 2);
  // measure only conditions on a sharp outcome
  CHECK(run_cli({"measure", "--gen", "dim=2", "--rule", "weighted"}) == 2);
  // missing input file
  CHECK(run_cli({"measure", "--input", "/nonexistent/problem.json"}) == 3);

  // input that parses but violates type invariants (non-Hermitian observable)
  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  const Json bad{{"state", pure_to_json(PureState(plus_state()))},
                 {"observable", Json{{"kind", "observable"}, {"matrix", matrix_to_json(skew)}}}};
  TempFile file("collapse_test_invalid.json", bad.dump());
  CHECK(run_cli({"measure", "--input", file.path.string()}) == 4);
}

TEST_CASE("a failed check exits with code 1") {
  // an impossible tolerance turns the p4 comparison into a reported violation
  CHECK(run_cli({"compare-rules", "--gen", "dim=3,rank=1,mults=2:1", "--seed", "9", "--tol",
                 "0"}) == 1);
}

TEST_CASE("cli_main runs a full campaign and writes the report file") {
  const auto out = std::filesystem::temp_directory_path() / "collapse_test_report.json";
  std::error_code ec;
  std::filesystem::remove(out, ec);
  const int code = run_cli({"p4-scan", "--seed", "7", "--trials", "5", "--dims", "2:3",
                            "--out", out.string()});
  CHECK(code == 0);
  const Json report = load_json_file(out.string());
  CHECK(report.at("master_seed") == 7);
  CHECK(report.at("config").at("command") == "p4-scan");
  std::filesystem::remove(out, ec);
}

#ifdef COLLAPSE_LAB_BIN
TEST_CASE("the installed binary reproduces its reports across separate processes") {
  const auto tmp = std::filesystem::temp_directory_path();
  const auto out_a = tmp / "collapse_proc_a.json";
  const auto out_b = tmp / "collapse_proc_b.json";
  const std::string base = std::string(COLLAPSE_LAB_BIN) +
                           " repeatability --gen dim=3,rank=2,mults=2:1 --seed 99 --trials 40"
                           " --out ";
  REQUIRE(std::system((base + out_a.string() + " 2>/dev/null").c_str()) == 0);
  REQUIRE(std::system((base + out_b.string() + " 2>/dev/null").c_str()) == 0);
  const Json a = report_reproducible_content(load_json_file(out_a.string()));
  const Json b = report_reproducible_content(load_json_file(out_b.string()));
  CHECK(a.dump() == b.dump());
  std::error_code ec;
  std::filesystem::remove(out_a, ec);
  std::filesystem::remove(out_b, ec);
}
#endif
