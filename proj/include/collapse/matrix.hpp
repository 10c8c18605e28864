#ifndef COLLAPSE_MATRIX_HPP
#define COLLAPSE_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>

#include "collapse/errors.hpp"

namespace collapse {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Which tensor factor partial_trace keeps.
enum class Factor { A, B };

/// Largest entry magnitude; 0 for empty matrices.
double max_abs(const Matrix& m);

/// Max entry deviation from Hermiticity, max |m - m^dagger|.
double hermiticity_deviation(const Matrix& m);

bool all_finite(const Matrix& m);

/// Hilbert-Schmidt inner product (a, b) = tr(a b^dagger).
/// Linear in the first argument, conjugate-linear in the second.
Complex hs_inner(const Matrix& a, const Matrix& b);

/// Kronecker product, first factor on the slow (row-major block) index.
Matrix kron(const Matrix& a, const Matrix& b);

/// Trace out one factor of a (dim_a * dim_b) square matrix. Index layout
/// matches kron: composite index i = ia * dim_b + ib.
Matrix partial_trace(const Matrix& m, int dim_a, int dim_b, Factor keep);

}  // namespace collapse

#endif
