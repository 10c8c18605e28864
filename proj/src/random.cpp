#include "collapse/random.hpp"

#include <numeric>

namespace collapse {

Matrix random_ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cgauss();
  return g;
}

Matrix random_density(int dim, int rank, Rng& rng) {
  if (dim < 1 || rank < 1 || rank > dim)
    throw ValidationError("random_density: need 1 <= rank <= dim");
  const Matrix g = random_ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // symmetrize away the last ulps so validation never sees rounding skew
  rho = (rho + rho.adjoint()) / 2.0;
  return rho;
}

Matrix random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw ValidationError("random_unitary: dim must be positive");
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

Vector random_pure(int dim, Rng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.cgauss();
  return v / v.norm();
}

Matrix random_hermitian_with_spectrum(int dim, const std::vector<int>& mults, Rng& rng) {
  const int total = std::accumulate(mults.begin(), mults.end(), 0);
  if (total != dim || mults.empty())
    throw ValidationError("random_hermitian_with_spectrum: multiplicities must sum to dim");
  RealVector diag(dim);
  int pos = 0;
  for (std::size_t c = 0; c < mults.size(); ++c) {
    if (mults[c] < 1) throw ValidationError("random_hermitian_with_spectrum: multiplicities must be positive");
    for (int i = 0; i < mults[c]; ++i) diag(pos++) = static_cast<double>(c + 1);
  }
  const Matrix u = random_unitary(dim, rng);
  Matrix h = u * diag.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint();
  return (h + h.adjoint()) / 2.0;
}

std::vector<int> random_multiplicities(int dim, Rng& rng) {
  std::vector<int> mults;
  int remaining = dim;
  while (remaining > 0) {
    const int take = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(remaining)));
    mults.push_back(take);
    remaining -= take;
  }
  return mults;
}

}  // namespace collapse
