#ifndef COLLAPSE_RANDOM_HPP
#define COLLAPSE_RANDOM_HPP

#include <vector>

#include "collapse/matrix.hpp"
#include "collapse/rng.hpp"

namespace collapse {

/// Matrix of independent standard complex Gaussians.
Matrix random_ginibre(int rows, int cols, Rng& rng);

/// Random density operator of the given rank: G G^dagger / tr(G G^dagger)
/// with G a dim x rank Ginibre matrix. Rotation invariant.
Matrix random_density(int dim, int rank, Rng& rng);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal pulled into Q.
Matrix random_unitary(int dim, Rng& rng);

/// Random unit vector, uniform on the sphere.
Vector random_pure(int dim, Rng& rng);

/// Hermitian matrix with eigenvalues 1..k of the given multiplicities,
/// conjugated by a random unitary. sum(mults) must equal dim.
Matrix random_hermitian_with_spectrum(int dim, const std::vector<int>& mults, Rng& rng);

/// Random composition of dim into cluster sizes (each uniform on what remains).
std::vector<int> random_multiplicities(int dim, Rng& rng);

}  // namespace collapse

#endif
