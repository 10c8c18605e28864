#include "collapse/matrix.hpp"

#include <cmath>

namespace collapse {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermiticity check on non-square matrix");
  return max_abs(m - m.adjoint());
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("hs_inner: operands have different shapes");
  // tr(a b^dagger) = sum_ij a_ij conj(b_ij)
  return (a.array() * b.array().conjugate()).sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Factor keep) {
  if (dim_a <= 0 || dim_b <= 0) throw DimensionMismatch("partial_trace: factor dims must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch("partial_trace: matrix size does not equal dim_a * dim_b");

  if (keep == Factor::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_b; ++k)
    for (int l = 0; l < dim_b; ++l)
      for (int i = 0; i < dim_a; ++i)
        out(k, l) += m(i * dim_b + k, i * dim_b + l);
  return out;
}

}  // namespace collapse
