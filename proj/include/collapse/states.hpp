#ifndef COLLAPSE_STATES_HPP
#define COLLAPSE_STATES_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "collapse/spectral.hpp"

namespace collapse {

inline constexpr double kDensityTol = 1e-10;
inline constexpr double kImpossibleOutcome = 1e-12;

/// Unit-norm state vector.
class PureState {
public:
  explicit PureState(Vector psi);

  const Vector& vector() const { return psi_; }
  int dim() const { return static_cast<int>(psi_.size()); }

private:
  Vector psi_;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Validated on
/// construction; instances are immutable. Pure states convert implicitly to
/// their rank-1 projector so every update rule accepts either.
class DensityOperator {
public:
  explicit DensityOperator(Matrix rho);
  DensityOperator(const PureState& psi);  // NOLINT: deliberate auto-promotion

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

private:
  Matrix rho_;
};

/// Hermitian matrix with its spectral decomposition cached.
class Observable {
public:
  explicit Observable(Matrix m, std::optional<double> cluster_tolerance = std::nullopt);

  const Matrix& matrix() const { return matrix_; }
  const SpectralDecomposition& decomposition() const { return decomposition_; }
  double cluster_tolerance() const { return decomposition_.cluster_tolerance; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

private:
  Matrix matrix_;
  SpectralDecomposition decomposition_;
};

/// Complete orthogonal family {P_alpha} with its eigenvalues, multiplicities
/// and an orthonormal basis of each eigenspace.
class ProjectorFamily {
public:
  ProjectorFamily(std::vector<double> eigenvalues, std::vector<Matrix> eigenbases);

  std::size_t size() const { return eigenvalues_.size(); }
  int dim() const { return dim_; }

  double eigenvalue(std::size_t k) const { return eigenvalues_.at(k); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const Matrix& projector(std::size_t k) const { return projectors_.at(k); }
  int multiplicity(std::size_t k) const { return multiplicities_.at(k); }

  /// dim x n_k matrix whose orthonormal columns span eigenspace k.
  const Matrix& eigenbasis(std::size_t k) const { return eigenbases_.at(k); }

  /// Index of the family eigenvalue nearest to `value` within `tol`.
  std::optional<std::size_t> index_of(double value, double tol = 1e-9) const;

  /// Sum_alpha alpha P_alpha.
  Matrix synthesize() const;

private:
  int dim_ = 0;
  std::vector<double> eigenvalues_;
  std::vector<Matrix> eigenbases_;
  std::vector<Matrix> projectors_;
  std::vector<int> multiplicities_;
};

/// Map eigenvalue -> Born probability.
class OutcomeDistribution {
public:
  OutcomeDistribution(std::vector<double> eigenvalues, std::vector<double> probabilities);

  std::size_t size() const { return eigenvalues_.size(); }
  double eigenvalue(std::size_t k) const { return eigenvalues_.at(k); }
  double probability(std::size_t k) const { return probabilities_.at(k); }
  const std::vector<double>& probabilities() const { return probabilities_; }

private:
  std::vector<double> eigenvalues_;
  std::vector<double> probabilities_;
};

/// Cluster the observable's spectrum into eigenspaces. Adjacent eigenvalues
/// merge when their gap is at most cluster_tolerance/4 and split when above
/// cluster_tolerance; a gap between the two flags an ill-conditioned
/// degeneracy and throws ClusterAmbiguity.
ProjectorFamily projector_family(const Observable& obs);

/// Born probabilities p_alpha = tr(P_alpha rho), clamped to [0, 1].
OutcomeDistribution born(const DensityOperator& rho, const ProjectorFamily& fam);

struct PurityRank {
  double purity;  ///< tr(rho^2)
  int rank;       ///< eigenvalues above 1e-10
};

PurityRank purity_rank(const DensityOperator& rho);

}  // namespace collapse

#endif
