#include "collapse/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "collapse/commutant.hpp"
#include "collapse/dilation.hpp"
#include "collapse/parallel.hpp"
#include "collapse/random.hpp"

namespace collapse {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

// fixed stream labels so each campaign stage has its own substream
constexpr std::uint64_t kStreamState = 0x51A7E;
constexpr std::uint64_t kStreamObservable = 0x0B5;
constexpr std::uint64_t kStreamSample = 0x5A3;

struct Problem {
  DensityOperator rho;
  Observable obs;
};

Problem make_problem(const ExperimentConfig& config, const Rng& master) {
  if (config.input_path && config.gen)
    throw ConfigError("exactly one input source allowed: --input or --gen");
  if (config.input_path) {
    const Json j = load_json_file(*config.input_path);
    if (!j.contains("state") || !j.contains("observable"))
      throw IoError("problem file needs \"state\" and \"observable\" objects");
    return {state_from_json(j["state"]), observable_from_json(j["observable"])};
  }
  if (!config.gen) throw ConfigError("this command needs --input FILE or --gen dim=...");

  GenSpec spec = *config.gen;
  if (spec.dim < 1) throw ConfigError("--gen needs dim >= 1");
  if (spec.rank == 0) spec.rank = spec.dim;
  if (spec.rank < 1 || spec.rank > spec.dim) throw ConfigError("--gen rank must be in [1, dim]");
  if (spec.mults.empty()) spec.mults.assign(spec.dim, 1);
  int total = 0;
  for (int m : spec.mults) {
    if (m < 1) throw ConfigError("--gen multiplicities must be positive");
    total += m;
  }
  if (total != spec.dim) throw ConfigError("--gen multiplicities must sum to dim");

  Rng state_stream = master.child(kStreamState);
  Rng obs_stream = master.child(kStreamObservable);
  return {DensityOperator(random_density(spec.dim, spec.rank, state_stream)),
          Observable(random_hermitian_with_spectrum(spec.dim, spec.mults, obs_stream))};
}

struct PureProblem {
  PureState psi;
  Observable obs;
};

PureProblem make_pure_problem(const ExperimentConfig& config, const Rng& master) {
  if (config.input_path && config.gen)
    throw ConfigError("exactly one input source allowed: --input or --gen");
  if (config.input_path) {
    const Json j = load_json_file(*config.input_path);
    if (!j.contains("state") || !j.contains("observable"))
      throw IoError("problem file needs \"state\" and \"observable\" objects");
    const Json& state = j["state"];
    if (!state.contains("kind") || state["kind"] != "pure" || !state.contains("vector"))
      throw ValidationError("min-disturbance needs a pure state (kind \"pure\")");
    const Matrix column = matrix_from_json(state["vector"]);
    if (column.cols() != 1) throw IoError("pure-state JSON: vector must have dims [n, 1]");
    return {PureState(column.col(0)), observable_from_json(j["observable"])};
  }
  if (!config.gen) throw ConfigError("this command needs --input FILE or --gen dim=...");

  GenSpec spec = *config.gen;
  if (spec.dim < 1) throw ConfigError("--gen needs dim >= 1");
  if (spec.mults.empty()) spec.mults.assign(spec.dim, 1);
  Rng state_stream = master.child(kStreamState);
  Rng obs_stream = master.child(kStreamObservable);
  return {PureState(random_pure(spec.dim, state_stream)),
          Observable(random_hermitian_with_spectrum(spec.dim, spec.mults, obs_stream))};
}

Json distribution_to_json(const OutcomeDistribution& dist) {
  Json pairs = Json::array();
  for (std::size_t k = 0; k < dist.size(); ++k)
    pairs.push_back(Json::array({dist.eigenvalue(k), dist.probability(k)}));
  return pairs;
}

void run_measure(const ExperimentConfig& config, const Rng& master, ExperimentReport& report) {
  if (config.rule != UpdateRule::Luders && config.rule != UpdateRule::VonNeumann)
    throw ConfigError("measure supports --rule luders or vn");
  const Problem problem = make_problem(config, master);
  if (problem.rho.dim() != problem.obs.dim())
    throw ValidationError("state and observable dimensions differ");
  const ProjectorFamily fam = projector_family(problem.obs);

  const OutcomeDistribution dist = born(problem.rho, fam);
  double sum = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) sum += dist.probability(k);
  report.checks.push_back({"born_normalized", std::abs(sum - 1.0) <= 1e-10, std::abs(sum - 1.0),
                           Json{{"distribution", distribution_to_json(dist)}}});

  Rng sample_stream = master.child(kStreamSample);
  const MeasurementSample sample = sample_measurement(problem.rho, fam, sample_stream);
  const DensityOperator post = config.rule == UpdateRule::Luders
                                   ? sample.state
                                   : vn_selective(problem.rho, fam, sample.index);
  report.checks.push_back({"sampled_outcome", true, 0.0,
                           Json{{"eigenvalue", sample.eigenvalue},
                                {"index", sample.index},
                                {"rule", to_string(config.rule)}}});

  const double post_dev = std::max(hermiticity_deviation(post.matrix()),
                                   std::abs(post.matrix().trace() - Complex(1.0, 0.0)));
  report.checks.push_back({"post_state_valid", post_dev <= 1e-10, post_dev,
                           Json{{"matrix", matrix_to_json(post.matrix())}}});

  const double repeat_p = born(post, fam).probability(sample.index);
  report.checks.push_back(
      {"repeat_certainty", 1.0 - repeat_p <= 1e-9, 1.0 - repeat_p, Json::object()});
}

void run_compare_rules(const ExperimentConfig& config, const Rng& master,
                       ExperimentReport& report) {
  const Problem problem = make_problem(config, master);
  if (problem.rho.dim() != problem.obs.dim())
    throw ValidationError("state and observable dimensions differ");
  const ProjectorFamily fam = projector_family(problem.obs);

  const DensityOperator luders = luders_nonselective(problem.rho, fam);
  const DensityOperator vn = vn_nonselective(problem.rho, fam);

  const Matrix diff = luders.matrix() - vn.matrix();
  Eigen::Index worst_i = 0;
  Eigen::Index worst_j = 0;
  double max_dev = 0.0;
  for (Eigen::Index i = 0; i < diff.rows(); ++i)
    for (Eigen::Index j = 0; j < diff.cols(); ++j)
      if (std::abs(diff(i, j)) > max_dev) {
        max_dev = std::abs(diff(i, j));
        worst_i = i;
        worst_j = j;
      }

  const VnApplicability app = vn_applicability(problem.rho, fam, config.tol.value_or(1e-9));
  report.checks.push_back({"rules_difference", true, max_dev,
                           Json{{"entry", {worst_i, worst_j}},
                                {"vn_applicable", app.applicable},
                                {"applicability_deviation", app.max_deviation},
                                {"luders", matrix_to_json(luders.matrix())},
                                {"vn", matrix_to_json(vn.matrix())}}});

  const double p4_dev = max_abs(p4_update(problem.rho, fam) - luders.matrix());
  const double p4_tol = config.tol.value_or(1e-10);
  report.checks.push_back({"p4_equals_luders", p4_dev <= p4_tol, p4_dev, Json::object()});

  // when the applicability condition holds the two rules must coincide
  const double agreement_dev = app.applicable ? max_dev : 0.0;
  report.checks.push_back({"applicability_implies_agreement", agreement_dev <= 1e-9,
                           agreement_dev, Json{{"vn_applicable", app.applicable}}});
}

void run_p4_scan(const ExperimentConfig& config, const Rng& master, ExperimentReport& report) {
  if (config.input_path || config.gen)
    throw ConfigError("p4-scan draws its own random instances; --input/--gen do not apply");
  std::vector<int> dims;
  for (int d = config.dims_lo; d <= config.dims_hi; ++d) dims.push_back(d);
  Rng scan_stream = master;
  const ScanReport scan = p4_conjecture_scan(dims, config.trials, scan_stream);

  const double threshold = config.tol.value_or(1e-8);
  const double psd_dev = std::max(0.0, -scan.worst_min_eigenvalue);
  report.checks.push_back({"p4_positive", psd_dev <= threshold, psd_dev,
                           Json{{"scan", scan_report_to_json(scan)}}});
  report.checks.push_back(
      {"p4_trace_preserved", scan.worst_trace_dev <= threshold, scan.worst_trace_dev, Json::object()});
  report.checks.push_back({"no_counterexamples", scan.counterexamples.empty(),
                           static_cast<double>(scan.counterexamples.size()), Json::object()});
  for (const ScanCounterexample& c : scan.counterexamples)
    report.counterexamples.push_back(
        Json{{"seed", c.seed}, {"dim", c.dim}, {"violation", c.violation}});
}

void run_dilation_check(const ExperimentConfig& config, const Rng& master,
                        ExperimentReport& report) {
  struct TrialResult {
    double unitary_dev = 0.0;
    double luders_dev = 0.0;
    double born_dev = 0.0;
    double purity_dev = 0.0;
    int dim = 0;
    std::uint64_t seed = 0;
  };

  auto evaluate = [](const DensityOperator& rho, const ProjectorFamily& fam, TrialResult& r) {
    const MeasurementDilation dil = build_dilation(fam);
    const int n = dil.system_dim() * dil.pointer_dim();
    r.unitary_dev = max_abs(dil.unitary().adjoint() * dil.unitary() - Matrix::Identity(n, n));
    r.luders_dev =
        max_abs(dilated_measurement(rho, dil).matrix() - luders_nonselective(rho, fam).matrix());
    const OutcomeDistribution pointer = pointer_distribution(rho, dil);
    const OutcomeDistribution direct = born(rho, fam);
    for (std::size_t k = 0; k < pointer.size(); ++k)
      r.born_dev = std::max(r.born_dev, std::abs(pointer.probability(k) - direct.probability(k)));

    // conjugation by U preserves the global purity while the reduced state may mix
    Matrix ready = Matrix::Zero(dil.pointer_dim(), dil.pointer_dim());
    ready(dil.ready_index(), dil.ready_index()) = 1.0;
    const Matrix before = kron(rho.matrix(), ready);
    const Matrix after = dil.unitary() * before * dil.unitary().adjoint();
    r.purity_dev = std::abs((after * after).trace().real() - (before * before).trace().real());
  };

  std::vector<TrialResult> results;
  if (config.input_path || config.gen) {
    const Problem problem = make_problem(config, master);
    if (problem.rho.dim() != problem.obs.dim())
      throw ValidationError("state and observable dimensions differ");
    TrialResult r;
    r.dim = problem.rho.dim();
    r.seed = config.master_seed;
    evaluate(problem.rho, projector_family(problem.obs), r);
    results.push_back(r);
  } else {
    const int lo = config.dims_lo;
    const int hi = config.dims_hi;
    results = run_trials<TrialResult>(config.trials, [&](long i) {
      TrialResult r;
      r.seed = master.child_seed(static_cast<std::uint64_t>(i));
      Rng stream(r.seed);
      r.dim = lo + static_cast<int>(stream.below(static_cast<std::uint64_t>(hi - lo + 1)));
      const Observable obs(
          random_hermitian_with_spectrum(r.dim, random_multiplicities(r.dim, stream), stream));
      const int rank = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(r.dim)));
      const DensityOperator rho(random_density(r.dim, rank, stream));
      evaluate(rho, projector_family(obs), r);
      return r;
    });
  }

  TrialResult worst;
  for (const TrialResult& r : results) {
    worst.unitary_dev = std::max(worst.unitary_dev, r.unitary_dev);
    worst.luders_dev = std::max(worst.luders_dev, r.luders_dev);
    worst.born_dev = std::max(worst.born_dev, r.born_dev);
    worst.purity_dev = std::max(worst.purity_dev, r.purity_dev);
  }
  const double luders_tol = config.tol.value_or(1e-9);
  report.checks.push_back(
      {"dilated_equals_luders", worst.luders_dev <= luders_tol, worst.luders_dev, Json::object()});
  report.checks.push_back(
      {"pointer_matches_born", worst.born_dev <= 1e-10, worst.born_dev, Json::object()});
  report.checks.push_back(
      {"unitary_completion", worst.unitary_dev <= 1e-9, worst.unitary_dev, Json::object()});
  report.checks.push_back(
      {"global_purity_preserved", worst.purity_dev <= 1e-9, worst.purity_dev, Json::object()});
  for (const TrialResult& r : results) {
    const double violation =
        std::max(std::max(r.luders_dev - luders_tol, r.born_dev - 1e-10),
                 std::max(r.unitary_dev - 1e-9, r.purity_dev - 1e-9));
    if (violation > 0.0)
      report.counterexamples.push_back(
          Json{{"seed", r.seed}, {"dim", r.dim}, {"violation", violation}});
  }

  // rank contrast: conjugation never changes the spectrum, the dilation can
  Rng demo_stream = master.child(0xDEA1);
  const DensityOperator demo_rho(random_density(4, 2, demo_stream));
  const RankInvarianceReport demo = rank_invariance_demo(demo_rho, 100, demo_stream);
  report.checks.push_back({"conjugation_preserves_spectrum",
                           demo.max_spectrum_dev <= 1e-9 && demo.rank_always_preserved,
                           demo.max_spectrum_dev, Json::object()});
  report.checks.push_back({"measurement_raises_rank", demo.measurement_raised_rank,
                           static_cast<double>(demo.exhibit_output_rank),
                           Json{{"input_rank", demo.exhibit_input_rank},
                                {"output_rank", demo.exhibit_output_rank}}});
}

void run_min_disturbance(const ExperimentConfig& config, const Rng& master,
                         ExperimentReport& report) {
  struct TrialResult {
    double excess = 0.0;
    double identity_dev = 0.0;
    int dim = 0;
    std::uint64_t seed = 0;
  };

  std::vector<TrialResult> results;
  if (config.input_path || config.gen) {
    const PureProblem problem = make_pure_problem(config, master);
    if (problem.psi.dim() != problem.obs.dim())
      throw ValidationError("state and observable dimensions differ");
    const ProjectorFamily fam = projector_family(problem.obs);
    const OutcomeDistribution dist = born(DensityOperator(problem.psi), fam);
    results = run_trials<TrialResult>(config.trials, [&](long i) {
      TrialResult r;
      r.seed = master.child_seed(static_cast<std::uint64_t>(i));
      Rng stream(r.seed);
      r.dim = problem.psi.dim();
      std::vector<std::size_t> possible;
      for (std::size_t k = 0; k < fam.size(); ++k)
        if (dist.probability(k) > kImpossibleOutcome) possible.push_back(k);
      const std::size_t outcome = possible[stream.below(possible.size())];
      const DisturbanceReport rep =
          verify_minimal_disturbance(problem.psi, fam, outcome, config.probes, stream);
      r.excess = rep.max_probe_excess;
      r.identity_dev = rep.identity_deviation;
      return r;
    });
  } else {
    const int lo = std::max(2, config.dims_lo);
    const int hi = std::max(lo, config.dims_hi);
    results = run_trials<TrialResult>(config.trials, [&](long i) {
      TrialResult r;
      r.seed = master.child_seed(static_cast<std::uint64_t>(i));
      Rng stream(r.seed);
      r.dim = lo + static_cast<int>(stream.below(static_cast<std::uint64_t>(hi - lo + 1)));
      std::vector<int> mults = random_multiplicities(r.dim, stream);
      while (std::all_of(mults.begin(), mults.end(), [](int m) { return m == 1; }))
        mults = random_multiplicities(r.dim, stream);  // need a degenerate eigenspace
      const Observable obs(random_hermitian_with_spectrum(r.dim, mults, stream));
      const ProjectorFamily fam = projector_family(obs);
      const PureState psi(random_pure(r.dim, stream));

      std::vector<std::size_t> degenerate;
      for (std::size_t k = 0; k < fam.size(); ++k)
        if (fam.multiplicity(k) >= 2) degenerate.push_back(k);
      const std::size_t outcome = degenerate[stream.below(degenerate.size())];

      const DisturbanceReport rep =
          verify_minimal_disturbance(psi, fam, outcome, config.probes, stream);
      r.excess = rep.max_probe_excess;
      r.identity_dev = rep.identity_deviation;
      return r;
    });
  }

  double worst_excess = -1.0;
  double worst_identity = 0.0;
  for (const TrialResult& r : results) {
    worst_excess = std::max(worst_excess, r.excess);
    worst_identity = std::max(worst_identity, r.identity_dev);
  }
  const double tol = config.tol.value_or(1e-10);
  report.checks.push_back({"probe_never_beats_projection", worst_excess <= tol,
                           std::max(0.0, worst_excess), Json::object()});
  report.checks.push_back(
      {"fidelity_equals_born_weight", worst_identity <= tol, worst_identity, Json::object()});
  for (const TrialResult& r : results)
    if (r.excess > tol || r.identity_dev > tol)
      report.counterexamples.push_back(Json{{"seed", r.seed},
                                            {"dim", r.dim},
                                            {"violation", std::max(r.excess, r.identity_dev)}});
}

void run_repeatability(const ExperimentConfig& config, const Rng& master,
                       ExperimentReport& report) {
  RepeatabilityReport merged;
  if (config.input_path || config.gen) {
    const Problem problem = make_problem(config, master);
    if (problem.rho.dim() != problem.obs.dim())
      throw ValidationError("state and observable dimensions differ");
    const ProjectorFamily fam = projector_family(problem.obs);
    Rng stream = master.child(kStreamSample);
    merged = verify_repeatability(problem.rho, fam, config.trials, stream);
  } else {
    struct TrialResult {
      bool agree_luders = false;
      bool agree_vn = false;
      double leak_luders = 0.0;
      double leak_vn = 0.0;
    };
    const int lo = config.dims_lo;
    const int hi = config.dims_hi;
    const auto results = run_trials<TrialResult>(config.trials, [&](long i) {
      Rng stream = master.child(static_cast<std::uint64_t>(i));
      const int dim = lo + static_cast<int>(stream.below(static_cast<std::uint64_t>(hi - lo + 1)));
      const Observable obs(
          random_hermitian_with_spectrum(dim, random_multiplicities(dim, stream), stream));
      const ProjectorFamily fam = projector_family(obs);
      const int rank = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(dim)));
      const DensityOperator rho(random_density(dim, rank, stream));
      const RepeatabilityReport one = verify_repeatability(rho, fam, 1, stream);
      return TrialResult{one.agreement_fraction_luders == 1.0, one.agreement_fraction_vn == 1.0,
                         one.max_leak_luders, one.max_leak_vn};
    });
    long agree_luders = 0;
    long agree_vn = 0;
    for (const TrialResult& r : results) {
      agree_luders += r.agree_luders ? 1 : 0;
      agree_vn += r.agree_vn ? 1 : 0;
      merged.max_leak_luders = std::max(merged.max_leak_luders, r.leak_luders);
      merged.max_leak_vn = std::max(merged.max_leak_vn, r.leak_vn);
    }
    merged.trials = config.trials;
    merged.agreement_fraction_luders = static_cast<double>(agree_luders) / config.trials;
    merged.agreement_fraction_vn = static_cast<double>(agree_vn) / config.trials;
  }

  const double leak_tol = config.tol.value_or(1e-9);
  report.checks.push_back({"luders_agreement_exact", merged.agreement_fraction_luders == 1.0,
                           1.0 - merged.agreement_fraction_luders, Json::object()});
  report.checks.push_back({"vn_agreement_exact", merged.agreement_fraction_vn == 1.0,
                           1.0 - merged.agreement_fraction_vn, Json::object()});
  report.checks.push_back({"luders_leak_bounded", merged.max_leak_luders <= leak_tol,
                           merged.max_leak_luders, Json::object()});
  report.checks.push_back(
      {"vn_leak_bounded", merged.max_leak_vn <= leak_tol, merged.max_leak_vn, Json::object()});
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::Measure: return "measure";
    case Command::CompareRules: return "compare-rules";
    case Command::P4Scan: return "p4-scan";
    case Command::DilationCheck: return "dilation-check";
    case Command::MinDisturbance: return "min-disturbance";
    case Command::Repeatability: return "repeatability";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  if (name == "measure") return Command::Measure;
  if (name == "compare-rules") return Command::CompareRules;
  if (name == "p4-scan") return Command::P4Scan;
  if (name == "dilation-check") return Command::DilationCheck;
  if (name == "min-disturbance") return Command::MinDisturbance;
  if (name == "repeatability") return Command::Repeatability;
  return std::nullopt;
}

GenSpec parse_gen_spec(const std::string& text) {
  GenSpec spec;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string part = text.substr(pos, next == std::string::npos ? next : next - pos);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("--gen: expected key=value, got \"" + part + "\"");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    try {
      if (key == "dim") {
        spec.dim = std::stoi(value);
      } else if (key == "rank") {
        spec.rank = std::stoi(value);
      } else if (key == "mults") {
        std::size_t at = 0;
        while (at < value.size()) {
          const std::size_t colon = value.find(':', at);
          spec.mults.push_back(
              std::stoi(value.substr(at, colon == std::string::npos ? colon : colon - at)));
          if (colon == std::string::npos) break;
          at = colon + 1;
        }
      } else {
        throw ConfigError("--gen: unknown key \"" + key + "\"");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("--gen: cannot parse number in \"" + part + "\"");
    } catch (const std::out_of_range&) {
      throw ConfigError("--gen: number out of range in \"" + part + "\"");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (spec.dim < 1) throw ConfigError("--gen: dim is required and must be >= 1");
  return spec;
}

Json config_to_json(const ExperimentConfig& config) {
  Json gen = Json();
  if (config.gen)
    gen = Json{{"dim", config.gen->dim}, {"rank", config.gen->rank}, {"mults", config.gen->mults}};
  return Json{{"command", to_string(config.command)},
              {"input", config.input_path ? Json(*config.input_path) : Json()},
              {"gen", gen},
              {"rule", to_string(config.rule)},
              {"seed", config.master_seed},
              {"trials", config.trials},
              {"probes", config.probes},
              {"dims", {config.dims_lo, config.dims_hi}},
              {"tol", config.tol ? Json(*config.tol) : Json()},
              {"format", config.format == ReportFormat::Json ? "json" : "csv"}};
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig config;
  try {
    const auto command = parse_command(j.at("command").get<std::string>());
    if (!command) throw ConfigError("unknown command in config");
    config.command = *command;
    if (!j.at("input").is_null()) config.input_path = j.at("input").get<std::string>();
    if (!j.at("gen").is_null()) {
      GenSpec spec;
      spec.dim = j.at("gen").at("dim").get<int>();
      spec.rank = j.at("gen").at("rank").get<int>();
      spec.mults = j.at("gen").at("mults").get<std::vector<int>>();
      config.gen = spec;
    }
    const auto rule = parse_rule(j.at("rule").get<std::string>());
    if (!rule) throw ConfigError("unknown rule in config");
    config.rule = *rule;
    config.master_seed = j.at("seed").get<std::uint64_t>();
    config.trials = j.at("trials").get<long>();
    config.probes = j.at("probes").get<long>();
    config.dims_lo = j.at("dims").at(0).get<int>();
    config.dims_hi = j.at("dims").at(1).get<int>();
    if (!j.at("tol").is_null()) config.tol = j.at("tol").get<double>();
    const std::string format = j.at("format").get<std::string>();
    if (format == "json") config.format = ReportFormat::Json;
    else if (format == "csv") config.format = ReportFormat::Csv;
    else throw ConfigError("unknown format in config");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  return config;
}

ExperimentReport run(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("--trials must be >= 1");
  if (config.probes < 1) throw ConfigError("--probes must be >= 1");
  if (config.dims_lo < 2 || config.dims_hi < config.dims_lo)
    throw ConfigError("--dims must satisfy 2 <= lo <= hi");

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config_to_json(config);
  report.master_seed = config.master_seed;
  const Rng master(config.master_seed);

  switch (config.command) {
    case Command::Measure: run_measure(config, master, report); break;
    case Command::CompareRules: run_compare_rules(config, master, report); break;
    case Command::P4Scan: run_p4_scan(config, master, report); break;
    case Command::DilationCheck: run_dilation_check(config, master, report); break;
    case Command::MinDisturbance: run_min_disturbance(config, master, report); break;
    case Command::Repeatability: run_repeatability(config, master, report); break;
  }

  report.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return report;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"collapse-lab: numerical laboratory for quantum measurement-update rules"};
  app.require_subcommand(1);

  std::string input;
  std::string gen;
  std::string rule = "luders";
  std::uint64_t seed = 0;
  long trials = 1000;
  long probes = 1000;
  std::string dims = "2:8";
  double tol = -1.0;
  std::string out;
  std::string format = "json";

  for (const char* name : {"measure", "compare-rules", "p4-scan", "dilation-check",
                           "min-disturbance", "repeatability"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", input, "problem JSON file with state and observable");
    sub->add_option("--gen", gen, "generator spec dim=N,rank=R,mults=a:b:c");
    sub->add_option("--rule", rule, "update rule: luders | vn | vn-basis | weighted");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--probes", probes, "probes per trial (min-disturbance)");
    sub->add_option("--dims", dims, "dimension range lo:hi for random campaigns");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_option("--format", format, "report format: json | csv");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    ExperimentConfig config;
    const auto command = parse_command(app.get_subcommands().front()->get_name());
    if (!command) throw ConfigError("unknown command");
    config.command = *command;
    if (!input.empty()) config.input_path = input;
    if (!gen.empty()) config.gen = parse_gen_spec(gen);
    const auto parsed_rule = parse_rule(rule);
    if (!parsed_rule) throw ConfigError("unknown rule \"" + rule + "\"");
    config.rule = *parsed_rule;
    config.master_seed = seed;
    config.trials = trials;
    config.probes = probes;
    const std::size_t colon = dims.find(':');
    if (colon == std::string::npos) throw ConfigError("--dims must look like lo:hi");
    try {
      config.dims_lo = std::stoi(dims.substr(0, colon));
      config.dims_hi = std::stoi(dims.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("--dims must look like lo:hi");
    }
    if (tol >= 0.0) config.tol = tol;
    if (!out.empty()) config.out_path = out;
    if (format == "json") config.format = ReportFormat::Json;
    else if (format == "csv") config.format = ReportFormat::Csv;
    else throw ConfigError("--format must be json or csv");

    const ExperimentReport report = run(config);
    const std::string bytes = emit_report(report, config.format);
    if (config.out_path)
      save_file(*config.out_path, bytes);
    else
      std::cout << bytes;
    for (const CheckResult& c : report.checks)
      std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (worst_dev=" << c.worst_dev
                << ")\n";
    return report.all_pass() ? kExitPass : kExitViolation;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace collapse
