#ifndef COLLAPSE_DILATION_HPP
#define COLLAPSE_DILATION_HPP

#include "collapse/rng.hpp"
#include "collapse/states.hpp"

namespace collapse {

/// Measurement as an entangling unitary on system (x) pointer.
///
/// The pointer has one basis state a_alpha per outcome; the ready state is
/// the last pointer basis vector, and pointer_dim = max(m, 2) so the
/// construction stays non-degenerate for a single-outcome family. On the
/// ready sector the unitary acts as the isometry
///   psi (x) ready  |->  sum_alpha (P_alpha psi) (x) a_alpha,
/// completed to a full unitary on the product space by an orthonormal
/// extension (only the ready sector is ever used, so any completion gives the
/// same physics; tests check completion independence via the invariants).
class MeasurementDilation {
public:
  MeasurementDilation(ProjectorFamily fam, int pointer_dim, int ready_index, Matrix unitary);

  int system_dim() const { return family_.dim(); }
  int pointer_dim() const { return pointer_dim_; }
  int ready_index() const { return ready_index_; }
  const Matrix& unitary() const { return unitary_; }
  const ProjectorFamily& family() const { return family_; }

private:
  ProjectorFamily family_;
  int pointer_dim_;
  int ready_index_;
  Matrix unitary_;
};

MeasurementDilation build_dilation(const ProjectorFamily& fam);

/// tr_pointer[ U (rho (x) |ready><ready|) U^dagger ]: the system state after
/// the interaction, with the apparatus ignored.
DensityOperator dilated_measurement(const DensityOperator& rho, const MeasurementDilation& dil);

/// Pointer-basis statistics of the apparatus after the interaction.
OutcomeDistribution pointer_distribution(const DensityOperator& rho, const MeasurementDilation& dil);

struct RankInvarianceReport {
  long trials = 0;
  double max_spectrum_dev = 0.0;   ///< sorted-spectrum deviation under conjugation
  bool rank_always_preserved = false;
  int exhibit_input_rank = 0;      ///< the |+> through sigma_z contrast
  int exhibit_output_rank = 0;
  bool measurement_raised_rank = false;
};

/// Conjugation by random unitaries preserves the spectrum (hence the rank);
/// the reduced dynamics of a dilation do not. Both halves in one report.
RankInvarianceReport rank_invariance_demo(const DensityOperator& rho, long trials, Rng& rng);

}  // namespace collapse

#endif
