#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace gedlb {

// Dense real matrices. Every matrix the library passes around as a
// "symmetric matrix" is expected to satisfy M == M^T.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Largest entry in magnitude (entrywise infinity norm).
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace gedlb
