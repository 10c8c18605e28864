#include "collapse/spectral.hpp"

#include <algorithm>

namespace collapse {

double SpectralDecomposition::spectral_radius() const {
  if (eigenvalues.size() == 0) return 0.0;
  return std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(eigenvalues.size() - 1)));
}

SpectralDecomposition hermitian_eig(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eig: matrix is not square");
  if (!all_finite(m)) throw ValidationError("hermitian_eig: matrix has non-finite entries");

  const double dev = hermiticity_deviation(m);
  if (dev > tol)
    throw NotHermitian("hermitian_eig: matrix deviates from Hermitian by " + std::to_string(dev), dev);

  const Matrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("hermitian_eig: eigensolver did not converge");

  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.cluster_tolerance = 1e-8 * std::max(1.0, out.spectral_radius());
  return out;
}

}  // namespace collapse
