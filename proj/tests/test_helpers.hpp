#ifndef COLLAPSE_TEST_HELPERS_HPP
#define COLLAPSE_TEST_HELPERS_HPP

#include <complex>

#include "collapse/matrix.hpp"

namespace collapse::testing {

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

inline Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline Vector plus_state() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

/// The worked degenerate example used throughout: A = diag(1, 1, 2) measured
/// on psi = (1, 1, 1)/sqrt(3).
inline Matrix degenerate_observable() {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  return m;
}

inline Vector uniform_three_state() {
  Vector v(3);
  const double s = 1.0 / std::sqrt(3.0);
  v << s, s, s;
  return v;
}

}  // namespace collapse::testing

#endif
