#ifndef COLLAPSE_UPDATE_RULES_HPP
#define COLLAPSE_UPDATE_RULES_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collapse/rng.hpp"
#include "collapse/states.hpp"

namespace collapse {

/// Stable rule identifiers for CLI and report use.
enum class UpdateRule { Luders, VonNeumann, VonNeumannBasis, Weighted };

std::string to_string(UpdateRule rule);
std::optional<UpdateRule> parse_rule(std::string_view name);

/// rho -> P rho P / tr(P rho) for the observed outcome. Pure states stay pure.
/// Throws ImpossibleOutcome when tr(P rho) <= 1e-12.
DensityOperator luders_selective(const DensityOperator& rho, const ProjectorFamily& fam,
                                 std::size_t outcome);

/// rho -> sum_alpha P_alpha rho P_alpha (the pinching of rho by the family).
DensityOperator luders_nonselective(const DensityOperator& rho, const ProjectorFamily& fam);

/// rho -> P_alpha / n_alpha: maximally mixed on the observed eigenspace,
/// independent of rho as long as the outcome was possible at all.
DensityOperator vn_selective(const DensityOperator& rho, const ProjectorFamily& fam,
                             std::size_t outcome);

/// rho -> sum_alpha (tr(P_alpha rho) / n_alpha) P_alpha.
DensityOperator vn_nonselective(const DensityOperator& rho, const ProjectorFamily& fam);

struct VnApplicability {
  bool applicable;
  double max_deviation;  ///< max_alpha || P rho P - (tr(P rho)/n) P ||_max
};

/// Whether rho satisfies P_alpha rho P_alpha = c_alpha P_alpha for every
/// alpha, the condition under which the degenerate rule is basis-independent.
VnApplicability vn_applicability(const DensityOperator& rho, const ProjectorFamily& fam,
                                 double tol);

/// The basis-dependent update rho -> sum_i <v_i|rho|v_i> |v_i><v_i| over an
/// orthonormal basis (columns of `basis`) refining the family's eigenspaces.
/// Different refining bases generally give different outputs.
/// Throws BasisNotRefining if some column has component > 1e-9 outside every
/// single eigenspace.
DensityOperator vn_basis_nonselective(const DensityOperator& rho, const ProjectorFamily& fam,
                                      const Matrix& basis);

/// Probability distribution over a family's eigenvalues; weights >= 0, sum 1.
class WeightDistribution {
public:
  WeightDistribution(const ProjectorFamily& fam, std::vector<double> weights);

  static WeightDistribution point_mass(const ProjectorFamily& fam, std::size_t outcome);

  std::size_t size() const { return weights_.size(); }
  double eigenvalue(std::size_t k) const { return eigenvalues_.at(k); }
  double weight(std::size_t k) const { return weights_.at(k); }

private:
  std::vector<double> eigenvalues_;
  std::vector<double> weights_;
};

/// rho -> sum_alpha w(alpha) P rho P / tr(P rho P): the update for a result
/// reported as a distribution over outcomes rather than a sharp value.
/// Throws ImpossibleOutcomeInSupport if w puts weight > 1e-12 on an outcome
/// with tr(P rho) <= 1e-12.
DensityOperator weighted_update(const DensityOperator& rho, const ProjectorFamily& fam,
                                const WeightDistribution& w);

/// w(alpha) proportional to exp(-(alpha - mean)^2 / (2 sigma^2)), normalized
/// over the family's eigenvalues. Stable for very small sigma.
WeightDistribution gaussian_weights(const ProjectorFamily& fam, double mean, double sigma);

/// Half-open interval [lower, upper).
struct Bin {
  double lower;
  double upper;
};

/// Coarse-grain an observable: one projector per non-empty bin, labelled by
/// the bin midpoint. Bins must be sorted, non-overlapping, and cover every
/// eigenvalue (UncoveredEigenvalue otherwise).
ProjectorFamily bin_observable(const Observable& obs, const std::vector<Bin>& bins);

struct MeasurementSample {
  std::size_t index;
  double eigenvalue;
  DensityOperator state;  ///< Lüders-selective post-state
};

/// Draw one outcome from born(rho, fam) and collapse accordingly.
MeasurementSample sample_measurement(const DensityOperator& rho, const ProjectorFamily& fam,
                                     Rng& rng);

struct RepeatabilityReport {
  long trials = 0;
  double agreement_fraction_luders = 0.0;
  double agreement_fraction_vn = 0.0;
  double max_leak_luders = 0.0;  ///< worst probability assigned to other outcomes on re-measurement
  double max_leak_vn = 0.0;

  bool pass(double leak_tol = 1e-9) const {
    return agreement_fraction_luders == 1.0 && agreement_fraction_vn == 1.0 &&
           max_leak_luders <= leak_tol && max_leak_vn <= leak_tol;
  }
};

/// Sample a measurement, re-measure the post-state with the same family, and
/// record whether the result repeats. Exercises both selective rules.
RepeatabilityReport verify_repeatability(const DensityOperator& rho, const ProjectorFamily& fam,
                                         long trials, Rng& rng);

struct DisturbanceReport {
  double projected_fidelity = 0.0;  ///< F* = |<phi*|psi>|^2 for phi* = P psi / ||P psi||
  double born_weight = 0.0;         ///< <psi|P|psi>
  double identity_deviation = 0.0;  ///< |F* - born_weight|
  double max_probe_fidelity = 0.0;
  double max_probe_excess = 0.0;  ///< max over probes of (fidelity - F*)
  long probes = 0;

  bool pass(double tol = 1e-10) const {
    return max_probe_excess <= tol && identity_deviation <= tol;
  }
};

/// Check that no random unit vector in the outcome eigenspace is closer to
/// psi than the normalized projection of psi itself.
DisturbanceReport verify_minimal_disturbance(const PureState& psi, const ProjectorFamily& fam,
                                             std::size_t outcome, long num_probes, Rng& rng);

}  // namespace collapse

#endif
