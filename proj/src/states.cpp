#include "collapse/states.hpp"

#include <algorithm>
#include <cmath>

namespace collapse {

PureState::PureState(Vector psi) : psi_(std::move(psi)) {
  if (psi_.size() == 0) throw ValidationError("PureState: empty vector");
  if (!all_finite(psi_)) throw ValidationError("PureState: non-finite entries");
  const double norm = psi_.norm();
  if (std::abs(norm - 1.0) > kDensityTol)
    throw ValidationError("PureState: vector norm " + std::to_string(norm) + " is not 1");
}

DensityOperator::DensityOperator(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
    throw ValidationError("DensityOperator: matrix must be square and non-empty");
  if (!all_finite(rho_)) throw ValidationError("DensityOperator: non-finite entries");
  const double herm = hermiticity_deviation(rho_);
  if (herm > kDensityTol)
    throw ValidationError("DensityOperator: Hermiticity deviation " + std::to_string(herm));
  const double trace_dev = std::abs(rho_.trace() - Complex(1.0, 0.0));
  if (trace_dev > kDensityTol)
    throw ValidationError("DensityOperator: trace deviates from 1 by " + std::to_string(trace_dev));
  const auto eig = hermitian_eig(rho_, kDensityTol);
  if (eig.eigenvalues(0) < -kDensityTol)
    throw ValidationError("DensityOperator: negative eigenvalue " + std::to_string(eig.eigenvalues(0)));
}

DensityOperator::DensityOperator(const PureState& psi)
    : DensityOperator(Matrix(psi.vector() * psi.vector().adjoint())) {}

Observable::Observable(Matrix m, std::optional<double> cluster_tolerance)
    : matrix_(std::move(m)), decomposition_(hermitian_eig(matrix_)) {
  if (cluster_tolerance) {
    if (*cluster_tolerance < 0.0) throw ValidationError("Observable: cluster tolerance must be >= 0");
    decomposition_.cluster_tolerance = *cluster_tolerance;
  }
}

ProjectorFamily::ProjectorFamily(std::vector<double> eigenvalues, std::vector<Matrix> eigenbases)
    : eigenvalues_(std::move(eigenvalues)), eigenbases_(std::move(eigenbases)) {
  if (eigenvalues_.empty() || eigenvalues_.size() != eigenbases_.size())
    throw ValidationError("ProjectorFamily: eigenvalues and eigenbases must align and be non-empty");
  if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end()))
    throw ValidationError("ProjectorFamily: eigenvalues must be ascending");
  dim_ = static_cast<int>(eigenbases_.front().rows());
  int total = 0;
  for (const Matrix& basis : eigenbases_) {
    if (basis.rows() != dim_ || basis.cols() < 1)
      throw ValidationError("ProjectorFamily: eigenbasis block has wrong shape");
    multiplicities_.push_back(static_cast<int>(basis.cols()));
    projectors_.push_back(basis * basis.adjoint());
    total += static_cast<int>(basis.cols());
  }
  if (total != dim_) throw ValidationError("ProjectorFamily: multiplicities do not sum to dim");
}

std::optional<std::size_t> ProjectorFamily::index_of(double value, double tol) const {
  std::size_t best = 0;
  double best_dist = std::abs(eigenvalues_[0] - value);
  for (std::size_t k = 1; k < eigenvalues_.size(); ++k) {
    const double d = std::abs(eigenvalues_[k] - value);
    if (d < best_dist) {
      best = k;
      best_dist = d;
    }
  }
  if (best_dist > tol) return std::nullopt;
  return best;
}

Matrix ProjectorFamily::synthesize() const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < size(); ++k) out += eigenvalues_[k] * projectors_[k];
  return out;
}

OutcomeDistribution::OutcomeDistribution(std::vector<double> eigenvalues,
                                         std::vector<double> probabilities)
    : eigenvalues_(std::move(eigenvalues)), probabilities_(std::move(probabilities)) {
  if (eigenvalues_.size() != probabilities_.size() || eigenvalues_.empty())
    throw ValidationError("OutcomeDistribution: eigenvalues and probabilities must align");
  double sum = 0.0;
  for (double p : probabilities_) {
    if (p < 0.0 || p > 1.0) throw ValidationError("OutcomeDistribution: probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDensityTol)
    throw ValidationError("OutcomeDistribution: probabilities sum to " + std::to_string(sum));
}

ProjectorFamily projector_family(const Observable& obs) {
  const SpectralDecomposition& dec = obs.decomposition();
  const double tol = dec.cluster_tolerance;
  const Eigen::Index n = dec.dim();

  // gap rule: > tol splits, <= tol/4 merges, in between is ill conditioned
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;  // [begin, end)
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n) {
      clusters.emplace_back(begin, i);
      break;
    }
    const double gap = dec.eigenvalues(i) - dec.eigenvalues(i - 1);
    if (gap > tol) {
      clusters.emplace_back(begin, i);
      begin = i;
    } else if (gap > tol / 4.0) {
      throw ClusterAmbiguity(
          "projector_family: eigenvalue gap " + std::to_string(gap) +
              " lies in the ambiguous window (tol/4, tol), tol = " + std::to_string(tol),
          gap);
    }
  }

  std::vector<double> values;
  std::vector<Matrix> bases;
  for (const auto& [b, e] : clusters) {
    double mean = 0.0;
    for (Eigen::Index i = b; i < e; ++i) mean += dec.eigenvalues(i);
    values.push_back(mean / static_cast<double>(e - b));
    bases.push_back(dec.eigenvectors.middleCols(b, e - b));
  }
  return ProjectorFamily(std::move(values), std::move(bases));
}

OutcomeDistribution born(const DensityOperator& rho, const ProjectorFamily& fam) {
  if (rho.dim() != fam.dim()) throw DimensionMismatch("born: state and family dims differ");
  std::vector<double> probs(fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const double p = (fam.projector(k) * rho.matrix()).trace().real();
    probs[k] = std::clamp(p, 0.0, 1.0);
  }
  return OutcomeDistribution(fam.eigenvalues(), std::move(probs));
}

PurityRank purity_rank(const DensityOperator& rho) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  const auto eig = hermitian_eig(rho.matrix());
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > 1e-10) ++rank;
  return {purity, rank};
}

}  // namespace collapse
