#ifndef COLLAPSE_SPECTRAL_HPP
#define COLLAPSE_SPECTRAL_HPP

#include "collapse/matrix.hpp"

namespace collapse {

inline constexpr double kHermitianTol = 1e-10;

/// Full spectral decomposition of a Hermitian matrix.
struct SpectralDecomposition {
  RealVector eigenvalues;  ///< ascending
  Matrix eigenvectors;     ///< orthonormal columns, V diag(lambda) V^dagger = input
  double cluster_tolerance = 0.0;

  Eigen::Index dim() const { return eigenvalues.size(); }
  double spectral_radius() const;
};

/// Decompose a Hermitian matrix. The input is symmetrized as (m + m^dagger)/2
/// before the solve; `tol` bounds the max entry deviation allowed from exact
/// Hermiticity. cluster_tolerance on the result defaults to
/// 1e-8 * max(1, spectral radius).
///
/// Throws NotHermitian when the deviation exceeds `tol`, NumericalFailure if
/// the eigensolver fails to converge.
SpectralDecomposition hermitian_eig(const Matrix& m, double tol = kHermitianTol);

}  // namespace collapse

#endif
