#ifndef COLLAPSE_COMMUTANT_HPP
#define COLLAPSE_COMMUTANT_HPP

#include <cstdint>
#include <vector>

#include "collapse/rng.hpp"
#include "collapse/states.hpp"

namespace collapse {

/// Hilbert-Schmidt-orthonormal basis of {X : X A = A X}, the block algebra
/// determined by A's spectral projectors. dimension = sum_alpha n_alpha^2.
struct CommutantBasis {
  std::vector<Matrix> elements;

  int dimension() const { return static_cast<int>(elements.size()); }
};

/// Block construction: matrix units |alpha,i><alpha,j| over an orthonormal
/// basis of each eigenspace.
CommutantBasis commutant_basis(const ProjectorFamily& fam);

/// Independent route: kernel of the commutation map X -> X A - A X, computed
/// as the null space of the dim^2 x dim^2 superoperator. Rank decided by a
/// relative cutoff of 1e-8; singular values falling in (1e-10, 1e-6) relative
/// to the largest make the decision ambiguous and throw NumericalFailure.
CommutantBasis commutant_basis_oracle(const Observable& obs);

/// Orthogonal projection sum_k (x, B_k) B_k onto the span of an
/// HS-orthonormal basis.
Matrix project_commutant(const Matrix& x, const CommutantBasis& basis);

/// The conjectural update Pi(rho): HS-orthogonal projection of rho onto the
/// commutant. Returned raw, deliberately without density validation -- the
/// conjecture under test is whether the output is a valid state.
Matrix p4_update(const DensityOperator& rho, const ProjectorFamily& fam);

struct ScanCounterexample {
  std::uint64_t seed;  ///< child seed reproducing the single trial
  int dim;
  double violation;
};

/// Outcome of a positivity/trace scan of the commutant projection.
struct ScanReport {
  std::vector<int> dims;
  long trials = 0;  ///< total trials across all dims
  double worst_min_eigenvalue = 1.0;
  double worst_trace_dev = 0.0;
  std::vector<ScanCounterexample> counterexamples;
  std::uint64_t master_seed = 0;
};

/// Random (density, observable) trials per dim; records the worst minimum
/// eigenvalue and trace deviation of Pi(rho) and every candidate violating
/// the 1e-8 threshold, each with its reproduction seed.
ScanReport p4_conjecture_scan(const std::vector<int>& dims, long trials_per_dim, Rng& rng);

/// Re-run a single scan trial from a counterexample's recorded seed.
/// Returns (min eigenvalue, trace deviation).
std::pair<double, double> p4_scan_trial(int dim, std::uint64_t trial_seed);

struct IdempotenceReport {
  long trials = 0;
  double max_double_apply_dev = 0.0;  ///< || Pi(Pi(X)) - Pi(X) ||_max
  double max_self_adjoint_dev = 0.0;  ///< | (Pi(X), Y) - (X, Pi(Y)) |
  double max_residual_overlap = 0.0;  ///< | (X - Pi(X), B_k) |

  bool pass(double tol = 1e-10) const {
    return max_double_apply_dev <= tol && max_self_adjoint_dev <= tol &&
           max_residual_overlap <= tol;
  }
};

/// Verify that Pi is an orthogonal projection: idempotent, self-adjoint under
/// the HS inner product, residuals orthogonal to the commutant. Runs on
/// random, generally non-Hermitian operator pairs.
IdempotenceReport p4_idempotence_check(const ProjectorFamily& fam, long trials, Rng& rng);

}  // namespace collapse

#endif
