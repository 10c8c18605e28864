#include "collapse/update_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace collapse {

namespace {

void require_same_dim(const DensityOperator& rho, const ProjectorFamily& fam) {
  if (rho.dim() != fam.dim())
    throw DimensionMismatch("update rule: state dim " + std::to_string(rho.dim()) +
                            " vs family dim " + std::to_string(fam.dim()));
}

double outcome_probability(const DensityOperator& rho, const ProjectorFamily& fam,
                           std::size_t outcome) {
  return (fam.projector(outcome) * rho.matrix()).trace().real();
}

}  // namespace

std::string to_string(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::Luders: return "luders";
    case UpdateRule::VonNeumann: return "vn";
    case UpdateRule::VonNeumannBasis: return "vn-basis";
    case UpdateRule::Weighted: return "weighted";
  }
  return "?";
}

std::optional<UpdateRule> parse_rule(std::string_view name) {
  if (name == "luders") return UpdateRule::Luders;
  if (name == "vn") return UpdateRule::VonNeumann;
  if (name == "vn-basis") return UpdateRule::VonNeumannBasis;
  if (name == "weighted") return UpdateRule::Weighted;
  return std::nullopt;
}

DensityOperator luders_selective(const DensityOperator& rho, const ProjectorFamily& fam,
                                 std::size_t outcome) {
  require_same_dim(rho, fam);
  const double p = outcome_probability(rho, fam, outcome);
  if (p <= kImpossibleOutcome)
    throw ImpossibleOutcome("luders_selective: outcome probability " + std::to_string(p));
  const Matrix& proj = fam.projector(outcome);
  Matrix post = proj * rho.matrix() * proj / p;
  post = (post + post.adjoint()) / 2.0;
  return DensityOperator(std::move(post));
}

DensityOperator luders_nonselective(const DensityOperator& rho, const ProjectorFamily& fam) {
  require_same_dim(rho, fam);
  Matrix post = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t k = 0; k < fam.size(); ++k)
    post += fam.projector(k) * rho.matrix() * fam.projector(k);
  post = (post + post.adjoint()) / 2.0;
  return DensityOperator(std::move(post));
}

DensityOperator vn_selective(const DensityOperator& rho, const ProjectorFamily& fam,
                             std::size_t outcome) {
  require_same_dim(rho, fam);
  const double p = outcome_probability(rho, fam, outcome);
  if (p <= kImpossibleOutcome)
    throw ImpossibleOutcome("vn_selective: outcome probability " + std::to_string(p));
  return DensityOperator(fam.projector(outcome) / static_cast<double>(fam.multiplicity(outcome)));
}

DensityOperator vn_nonselective(const DensityOperator& rho, const ProjectorFamily& fam) {
  require_same_dim(rho, fam);
  Matrix post = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const double p = outcome_probability(rho, fam, k);
    post += (p / static_cast<double>(fam.multiplicity(k))) * fam.projector(k);
  }
  post = (post + post.adjoint()) / 2.0;
  return DensityOperator(std::move(post));
}

VnApplicability vn_applicability(const DensityOperator& rho, const ProjectorFamily& fam,
                                 double tol) {
  require_same_dim(rho, fam);
  double worst = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const Matrix& proj = fam.projector(k);
    const double c = outcome_probability(rho, fam, k) / static_cast<double>(fam.multiplicity(k));
    const Matrix dev = proj * rho.matrix() * proj - c * proj;
    worst = std::max(worst, max_abs(dev));
  }
  return {worst <= tol, worst};
}

DensityOperator vn_basis_nonselective(const DensityOperator& rho, const ProjectorFamily& fam,
                                      const Matrix& basis) {
  require_same_dim(rho, fam);
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim())
    throw DimensionMismatch("vn_basis_nonselective: basis must be square of the state's dim");
  const double ortho = max_abs(basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols()));
  if (ortho > 1e-9)
    throw ValidationError("vn_basis_nonselective: basis columns not orthonormal, deviation " +
                          std::to_string(ortho));

  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const Vector v = basis.col(i);
    double outside = 1.0;
    for (std::size_t k = 0; k < fam.size(); ++k)
      outside = std::min(outside, (v - fam.projector(k) * v).norm());
    if (outside > 1e-9)
      throw BasisNotRefining("vn_basis_nonselective: basis vector " + std::to_string(i) +
                             " has component " + std::to_string(outside) +
                             " outside every eigenspace");
  }

  Matrix post = Matrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const Vector v = basis.col(i);
    const double r = (v.adjoint() * rho.matrix() * v)(0).real();  // r_i = <v|rho|v>
    post += r * (v * v.adjoint());
  }
  post = (post + post.adjoint()) / 2.0;
  return DensityOperator(std::move(post));
}

WeightDistribution::WeightDistribution(const ProjectorFamily& fam, std::vector<double> weights)
    : eigenvalues_(fam.eigenvalues()), weights_(std::move(weights)) {
  if (weights_.size() != fam.size())
    throw ValidationError("WeightDistribution: one weight per family eigenvalue required");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw ValidationError("WeightDistribution: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kDensityTol)
    throw ValidationError("WeightDistribution: weights sum to " + std::to_string(sum));
}

WeightDistribution WeightDistribution::point_mass(const ProjectorFamily& fam,
                                                  std::size_t outcome) {
  std::vector<double> w(fam.size(), 0.0);
  w.at(outcome) = 1.0;
  return WeightDistribution(fam, std::move(w));
}

DensityOperator weighted_update(const DensityOperator& rho, const ProjectorFamily& fam,
                                const WeightDistribution& w) {
  require_same_dim(rho, fam);
  if (w.size() != fam.size())
    throw DimensionMismatch("weighted_update: weight distribution does not match family");
  Matrix post = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    if (w.weight(k) <= kImpossibleOutcome) continue;
    const double p = outcome_probability(rho, fam, k);
    if (p <= kImpossibleOutcome)
      throw ImpossibleOutcomeInSupport("weighted_update: weight " + std::to_string(w.weight(k)) +
                                       " on outcome with probability " + std::to_string(p));
    post += w.weight(k) * (fam.projector(k) * rho.matrix() * fam.projector(k)) / p;
  }
  post = (post + post.adjoint()) / 2.0;
  return DensityOperator(std::move(post));
}

WeightDistribution gaussian_weights(const ProjectorFamily& fam, double mean, double sigma) {
  if (sigma <= 0.0) throw ValidationError("gaussian_weights: sigma must be positive");
  std::vector<double> sq(fam.size());
  double min_sq = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const double d = fam.eigenvalue(k) - mean;
    sq[k] = d * d;
    min_sq = std::min(min_sq, sq[k]);
  }
  // shift by the smallest exponent so the nearest eigenvalue never underflows
  std::vector<double> w(fam.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    w[k] = std::exp(-(sq[k] - min_sq) / (2.0 * sigma * sigma));
    sum += w[k];
  }
  for (double& x : w) x /= sum;
  return WeightDistribution(fam, std::move(w));
}

ProjectorFamily bin_observable(const Observable& obs, const std::vector<Bin>& bins) {
  if (bins.empty()) throw ValidationError("bin_observable: empty binning");
  for (const Bin& b : bins)
    if (!(b.lower < b.upper)) throw ValidationError("bin_observable: bin with lower >= upper");
  for (std::size_t i = 1; i < bins.size(); ++i)
    if (bins[i].lower < bins[i - 1].upper)
      throw ValidationError("bin_observable: bins must be sorted and non-overlapping");

  const ProjectorFamily fine = projector_family(obs);
  std::vector<double> labels;
  std::vector<Matrix> bases;
  std::size_t next = 0;
  for (const Bin& b : bins) {
    std::vector<std::size_t> members;
    while (next < fine.size() && fine.eigenvalue(next) < b.upper) {
      if (fine.eigenvalue(next) < b.lower)
        throw UncoveredEigenvalue("bin_observable: eigenvalue " +
                                      std::to_string(fine.eigenvalue(next)) + " not covered",
                                  fine.eigenvalue(next));
      members.push_back(next++);
    }
    if (members.empty()) continue;
    int cols = 0;
    for (std::size_t m : members) cols += fine.multiplicity(m);
    Matrix basis(fine.dim(), cols);
    int at = 0;
    for (std::size_t m : members) {
      basis.middleCols(at, fine.multiplicity(m)) = fine.eigenbasis(m);
      at += fine.multiplicity(m);
    }
    labels.push_back((b.lower + b.upper) / 2.0);
    bases.push_back(std::move(basis));
  }
  if (next < fine.size())
    throw UncoveredEigenvalue(
        "bin_observable: eigenvalue " + std::to_string(fine.eigenvalue(next)) + " above all bins",
        fine.eigenvalue(next));
  return ProjectorFamily(std::move(labels), std::move(bases));
}

MeasurementSample sample_measurement(const DensityOperator& rho, const ProjectorFamily& fam,
                                     Rng& rng) {
  const OutcomeDistribution dist = born(rho, fam);
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t picked = fam.size();  // sentinel
  std::size_t last_possible = fam.size();
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist.probability(k) <= kImpossibleOutcome) continue;
    last_possible = k;
    cum += dist.probability(k);
    if (u < cum) {
      picked = k;
      break;
    }
  }
  if (picked == fam.size()) picked = last_possible;  // u fell into rounding slack
  return {picked, fam.eigenvalue(picked), luders_selective(rho, fam, picked)};
}

RepeatabilityReport verify_repeatability(const DensityOperator& rho, const ProjectorFamily& fam,
                                         long trials, Rng& rng) {
  require_same_dim(rho, fam);
  RepeatabilityReport rep;
  rep.trials = trials;
  long agree_luders = 0;
  long agree_vn = 0;
  for (long t = 0; t < trials; ++t) {
    Rng stream = rng.child(static_cast<std::uint64_t>(t));
    const MeasurementSample first = sample_measurement(rho, fam, stream);

    const DensityOperator& post_luders = first.state;
    const DensityOperator post_vn = vn_selective(rho, fam, first.index);

    const MeasurementSample again_luders = sample_measurement(post_luders, fam, stream);
    const MeasurementSample again_vn = sample_measurement(post_vn, fam, stream);
    if (again_luders.index == first.index) ++agree_luders;
    if (again_vn.index == first.index) ++agree_vn;

    const OutcomeDistribution redo_luders = born(post_luders, fam);
    const OutcomeDistribution redo_vn = born(post_vn, fam);
    double leak_luders = 0.0;
    double leak_vn = 0.0;
    for (std::size_t k = 0; k < fam.size(); ++k) {
      if (k == first.index) continue;
      leak_luders += redo_luders.probability(k);
      leak_vn += redo_vn.probability(k);
    }
    rep.max_leak_luders = std::max(rep.max_leak_luders, leak_luders);
    rep.max_leak_vn = std::max(rep.max_leak_vn, leak_vn);
  }
  rep.agreement_fraction_luders = trials > 0 ? static_cast<double>(agree_luders) / trials : 1.0;
  rep.agreement_fraction_vn = trials > 0 ? static_cast<double>(agree_vn) / trials : 1.0;
  return rep;
}

DisturbanceReport verify_minimal_disturbance(const PureState& psi, const ProjectorFamily& fam,
                                             std::size_t outcome, long num_probes, Rng& rng) {
  if (psi.dim() != fam.dim())
    throw DimensionMismatch("verify_minimal_disturbance: state and family dims differ");
  const Matrix& proj = fam.projector(outcome);
  const Vector projected = proj * psi.vector();
  const double weight = projected.squaredNorm();  // = <psi|P|psi>
  if (weight <= kImpossibleOutcome)
    throw ImpossibleOutcome("verify_minimal_disturbance: outcome weight " + std::to_string(weight));

  const Vector closest = projected / projected.norm();
  DisturbanceReport rep;
  rep.probes = num_probes;
  rep.born_weight = weight;
  rep.projected_fidelity = std::norm((closest.adjoint() * psi.vector())(0));
  rep.identity_deviation = std::abs(rep.projected_fidelity - rep.born_weight);

  const Matrix& basis = fam.eigenbasis(outcome);
  for (long t = 0; t < num_probes; ++t) {
    Vector coeffs(basis.cols());
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = rng.cgauss();
    coeffs /= coeffs.norm();
    const Vector probe = basis * coeffs;  // uniform unit vector in the eigenspace
    const double fidelity = std::norm((probe.adjoint() * psi.vector())(0));
    rep.max_probe_fidelity = std::max(rep.max_probe_fidelity, fidelity);
    rep.max_probe_excess = std::max(rep.max_probe_excess, fidelity - rep.projected_fidelity);
  }
  return rep;
}

}  // namespace collapse
