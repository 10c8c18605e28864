#include "collapse/dilation.hpp"

#include <algorithm>

#include "collapse/random.hpp"

namespace collapse {

MeasurementDilation::MeasurementDilation(ProjectorFamily fam, int pointer_dim, int ready_index,
                                         Matrix unitary)
    : family_(std::move(fam)),
      pointer_dim_(pointer_dim),
      ready_index_(ready_index),
      unitary_(std::move(unitary)) {
  const int n = family_.dim() * pointer_dim_;
  if (unitary_.rows() != n || unitary_.cols() != n)
    throw DimensionMismatch("MeasurementDilation: unitary has wrong size");
  const double dev = max_abs(unitary_.adjoint() * unitary_ - Matrix::Identity(n, n));
  if (dev > 1e-9)
    throw ValidationError("MeasurementDilation: completion is not unitary, deviation " +
                          std::to_string(dev));
}

MeasurementDilation build_dilation(const ProjectorFamily& fam) {
  const int d = fam.dim();
  const int m = static_cast<int>(fam.size());
  const int p = std::max(m, 2);
  const int ready = p - 1;
  const int n = d * p;

  // Isometry on the ready sector: e_k (x) ready |-> sum_alpha (P_alpha e_k) (x) a_alpha.
  Matrix w(n, d);
  w.setZero();
  for (int k = 0; k < d; ++k)
    for (int alpha = 0; alpha < m; ++alpha)
      for (int s = 0; s < d; ++s) w(s * p + alpha, k) += fam.projector(alpha)(s, k);

  // Complete the range to a full orthonormal basis; the extra columns serve
  // the never-used non-ready sectors.
  Eigen::HouseholderQR<Matrix> qr(w);
  const Matrix q = qr.householderQ();

  Matrix u(n, n);
  int extra = d;  // q's columns beyond the range of w
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < p; ++j) {
      if (j == ready)
        u.col(k * p + j) = w.col(k);
      else
        u.col(k * p + j) = q.col(extra++);
    }
  return MeasurementDilation(fam, p, ready, std::move(u));
}

namespace {

Matrix global_state(const DensityOperator& rho, const MeasurementDilation& dil) {
  const int p = dil.pointer_dim();
  Matrix ready_proj = Matrix::Zero(p, p);
  ready_proj(dil.ready_index(), dil.ready_index()) = 1.0;
  const Matrix before = kron(rho.matrix(), ready_proj);
  Matrix after = dil.unitary() * before * dil.unitary().adjoint();
  return (after + after.adjoint()) / 2.0;
}

}  // namespace

DensityOperator dilated_measurement(const DensityOperator& rho, const MeasurementDilation& dil) {
  if (rho.dim() != dil.system_dim())
    throw DimensionMismatch("dilated_measurement: state dim does not match dilation");
  return DensityOperator(
      partial_trace(global_state(rho, dil), dil.system_dim(), dil.pointer_dim(), Factor::A));
}

OutcomeDistribution pointer_distribution(const DensityOperator& rho,
                                         const MeasurementDilation& dil) {
  if (rho.dim() != dil.system_dim())
    throw DimensionMismatch("pointer_distribution: state dim does not match dilation");
  const Matrix apparatus =
      partial_trace(global_state(rho, dil), dil.system_dim(), dil.pointer_dim(), Factor::B);
  const ProjectorFamily& fam = dil.family();
  std::vector<double> probs(fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k)
    probs[k] = std::clamp(apparatus(static_cast<int>(k), static_cast<int>(k)).real(), 0.0, 1.0);
  return OutcomeDistribution(fam.eigenvalues(), std::move(probs));
}

RankInvarianceReport rank_invariance_demo(const DensityOperator& rho, long trials, Rng& rng) {
  RankInvarianceReport rep;
  rep.trials = trials;
  rep.rank_always_preserved = true;

  const auto base_eig = hermitian_eig(rho.matrix());
  const int base_rank = purity_rank(rho).rank;
  for (long t = 0; t < trials; ++t) {
    Rng stream = rng.child(static_cast<std::uint64_t>(t));
    const Matrix u = random_unitary(rho.dim(), stream);
    Matrix conj = u * rho.matrix() * u.adjoint();
    conj = (conj + conj.adjoint()) / 2.0;
    const auto eig = hermitian_eig(conj);
    rep.max_spectrum_dev =
        std::max(rep.max_spectrum_dev, (eig.eigenvalues - base_eig.eigenvalues).cwiseAbs().maxCoeff());
    if (purity_rank(DensityOperator(conj)).rank != base_rank) rep.rank_always_preserved = false;
  }

  // Contrast: the sigma_z dilation takes |+> (rank 1) to I/2 (rank 2).
  Matrix sigma_z(2, 2);
  sigma_z << 1.0, 0.0, 0.0, -1.0;
  const ProjectorFamily fam = projector_family(Observable(sigma_z));
  const MeasurementDilation dil = build_dilation(fam);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityOperator input{PureState(plus)};
  const DensityOperator output = dilated_measurement(input, dil);
  rep.exhibit_input_rank = purity_rank(input).rank;
  rep.exhibit_output_rank = purity_rank(output).rank;
  rep.measurement_raised_rank = rep.exhibit_output_rank > rep.exhibit_input_rank;
  return rep;
}

}  // namespace collapse
