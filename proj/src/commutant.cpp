#include "collapse/commutant.hpp"

#include <algorithm>
#include <cmath>

#include "collapse/parallel.hpp"
#include "collapse/random.hpp"

namespace collapse {

CommutantBasis commutant_basis(const ProjectorFamily& fam) {
  CommutantBasis out;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const Matrix& basis = fam.eigenbasis(k);
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
      for (Eigen::Index j = 0; j < basis.cols(); ++j)
        out.elements.push_back(basis.col(i) * basis.col(j).adjoint());
  }
  return out;
}

CommutantBasis commutant_basis_oracle(const Observable& obs) {
  const int d = obs.dim();
  const int dd = d * d;
  const Matrix& a = obs.matrix();

  // K vec(X) = vec(X A - A X) with column-major vec: K = A^T (x) I - I (x) A.
  // K is Hermitian for Hermitian A, so |eigenvalues| are its singular values.
  Matrix k_super = Matrix::Zero(dd, dd);
  const Matrix at = a.transpose();
  for (int i = 0; i < d; ++i) {
    k_super.block(i * d, i * d, d, d) -= a;
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < d; ++r) k_super(i * d + r, j * d + r) += at(i, j);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(k_super);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("commutant_basis_oracle: eigensolver did not converge");

  const RealVector& vals = solver.eigenvalues();
  double s_max = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) s_max = std::max(s_max, std::abs(vals(i)));

  CommutantBasis out;
  if (s_max <= 1e-12 * std::max(1.0, max_abs(a))) {
    // the commutation map vanishes: A is numerically a multiple of the
    // identity and everything commutes
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      Vector v = solver.eigenvectors().col(i);
      out.elements.push_back(Matrix::Map(v.data(), d, d));
    }
    return out;
  }

  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double rel = std::abs(vals(i)) / s_max;
    if (rel > 1e-10 && rel < 1e-6)
      throw NumericalFailure("commutant_basis_oracle: singular value at relative magnitude " +
                             std::to_string(rel) + " makes the rank decision ambiguous");
    if (rel < 1e-8) {
      Vector v = solver.eigenvectors().col(i);
      out.elements.push_back(Matrix::Map(v.data(), d, d));
    }
  }
  return out;
}

Matrix project_commutant(const Matrix& x, const CommutantBasis& basis) {
  if (basis.elements.empty()) throw ValidationError("project_commutant: empty basis");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& b : basis.elements) out += hs_inner(x, b) * b;
  return out;
}

Matrix p4_update(const DensityOperator& rho, const ProjectorFamily& fam) {
  if (rho.dim() != fam.dim()) throw DimensionMismatch("p4_update: state and family dims differ");
  return project_commutant(rho.matrix(), commutant_basis(fam));
}

namespace {

std::pair<double, double> scan_trial_impl(int dim, Rng& stream) {
  const std::vector<int> mults = random_multiplicities(dim, stream);
  const Observable obs(random_hermitian_with_spectrum(dim, mults, stream));
  const ProjectorFamily fam = projector_family(obs);
  const int rank = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(dim)));
  const DensityOperator rho(random_density(dim, rank, stream));

  const Matrix pi = p4_update(rho, fam);
  const double trace_dev = std::abs(pi.trace() - Complex(1.0, 0.0));
  const auto eig = hermitian_eig(pi, 1e-8);  // Pi(rho) is Hermitian up to rounding
  return {eig.eigenvalues(0), trace_dev};
}

}  // namespace

std::pair<double, double> p4_scan_trial(int dim, std::uint64_t trial_seed) {
  Rng stream(trial_seed);
  return scan_trial_impl(dim, stream);
}

ScanReport p4_conjecture_scan(const std::vector<int>& dims, long trials_per_dim, Rng& rng) {
  for (int d : dims)
    if (d < 2) throw ValidationError("p4_conjecture_scan: dims must be >= 2");

  struct TrialStat {
    double min_eig = 0.0;
    double trace_dev = 0.0;
    std::uint64_t seed = 0;
    int dim = 0;
  };
  const long total = trials_per_dim * static_cast<long>(dims.size());
  const auto stats = run_trials<TrialStat>(total, [&](long i) {
    TrialStat s;
    s.dim = dims[static_cast<std::size_t>(i / trials_per_dim)];
    s.seed = rng.child_seed(static_cast<std::uint64_t>(i));
    std::tie(s.min_eig, s.trace_dev) = p4_scan_trial(s.dim, s.seed);
    return s;
  });

  ScanReport report;
  report.dims = dims;
  report.master_seed = rng.seed();
  report.trials = total;
  for (const TrialStat& s : stats) {
    report.worst_min_eigenvalue = std::min(report.worst_min_eigenvalue, s.min_eig);
    report.worst_trace_dev = std::max(report.worst_trace_dev, s.trace_dev);
    const double violation = std::max(std::max(0.0, -s.min_eig), s.trace_dev);
    if (violation > 1e-8) report.counterexamples.push_back({s.seed, s.dim, violation});
  }
  return report;
}

IdempotenceReport p4_idempotence_check(const ProjectorFamily& fam, long trials, Rng& rng) {
  const CommutantBasis basis = commutant_basis(fam);
  const int d = fam.dim();
  IdempotenceReport rep;
  rep.trials = trials;
  for (long t = 0; t < trials; ++t) {
    Rng stream = rng.child(static_cast<std::uint64_t>(t));
    const Matrix x = random_ginibre(d, d, stream);
    const Matrix y = random_ginibre(d, d, stream);

    const Matrix px = project_commutant(x, basis);
    const Matrix py = project_commutant(y, basis);

    rep.max_double_apply_dev =
        std::max(rep.max_double_apply_dev, max_abs(project_commutant(px, basis) - px));
    rep.max_self_adjoint_dev =
        std::max(rep.max_self_adjoint_dev, std::abs(hs_inner(px, y) - hs_inner(x, py)));

    const Matrix residual = x - px;
    for (const Matrix& b : basis.elements)
      rep.max_residual_overlap = std::max(rep.max_residual_overlap, std::abs(hs_inner(residual, b)));
  }
  return rep;
}

}  // namespace collapse
