#pragma once

// Symmetric eigendecomposition, eigenspace grouping, and the spectral
// projections (PSD cone, majorization polytope, Schur-Horn orbitope).

#include <gedlb/errors.hpp>
#include <gedlb/linalg.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace gedlb {

struct EigDecomposition {
  Vector values;   // descending
  Matrix vectors;  // column k belongs to values[k]
};

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionMismatch(std::string(what) + ": matrix must be square");
}

inline EigDecomposition eig_sym(const Matrix& m) {
  require_square(m, "eig_sym");
  const double asym = max_abs(Matrix(m - m.transpose()));
  if (asym > 1e-10 * std::max(1.0, max_abs(m))) throw BadParams("eig_sym: matrix is not symmetric");
  const int n = static_cast<int>(m.rows());
  EigDecomposition out;
  if (n == 0) return out;
  const Matrix s = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() == Eigen::Success) {
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
  }
  // The implicit QR step occasionally stalls on clustered spectra; the same
  // matrix under the reversal permutation tridiagonalizes differently.
  const Matrix r = s.reverse();
  solver.compute(r);
  if (solver.info() != Eigen::Success) throw NoConvergence("symmetric eigensolver did not converge");
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse().colwise().reverse();
  return out;
}

inline Vector eigenvalues_desc(const Matrix& m) { return eig_sym(m).values; }

struct EigStructure {
  std::vector<double> distinct_values;  // strictly decreasing
  std::vector<int> multiplicities;
  std::vector<Matrix> projectors;
  std::vector<Matrix> bases;  // orthonormal columns spanning each eigenspace
  std::vector<double> mu;     // incoherences
  double grouping_tol = 0.0;

  int m() const noexcept { return static_cast<int>(distinct_values.size()); }
  int n() const noexcept { return projectors.empty() ? 0 : static_cast<int>(projectors[0].rows()); }

  // Second-highest multiplicity (counted with repetition over eigenspaces).
  int kappa() const {
    if (m() < 2) throw BadParams("kappa needs at least two eigenspaces");
    std::vector<int> mult = multiplicities;
    std::sort(mult.begin(), mult.end(), std::greater<>());
    return mult[1];
  }

  // Index of the eigenspace with the largest incoherence (first on ties).
  int ell() const {
    return static_cast<int>(std::max_element(mu.begin(), mu.end()) - mu.begin());
  }
};

inline std::vector<double> incoherences(const EigStructure& es) {
  std::vector<double> mu;
  mu.reserve(es.projectors.size());
  for (const Matrix& p : es.projectors) mu.push_back(p.colwise().norm().maxCoeff());
  return mu;
}

inline constexpr double kDefaultGroupingTol = 1e-6;

// Greedy clustering of the sorted spectrum: neighbors closer than
// tol * max(1, ||M||_2) share an eigenspace.
inline EigStructure eigenspaces(const Matrix& m, double tol = kDefaultGroupingTol) {
  EigDecomposition ed = eig_sym(m);
  const int n = static_cast<int>(ed.values.size());
  EigStructure es;
  if (n == 0) return es;
  const double norm2 = ed.values.cwiseAbs().maxCoeff();
  const double t = tol * std::max(1.0, norm2);
  es.grouping_tol = t;

  std::vector<int> starts{0};
  for (int k = 1; k < n; ++k) {
    double gap = ed.values[k - 1] - ed.values[k];
    if (gap > t) {
      if (gap < 10.0 * t)
        throw AmbiguousClustering("eigenvalue gap " + std::to_string(gap) +
                                  " is too close to the grouping tolerance");
      starts.push_back(k);
    }
  }
  starts.push_back(n);
  for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
    const int lo = starts[c], len = starts[c + 1] - starts[c];
    Matrix basis = ed.vectors.middleCols(lo, len);
    es.distinct_values.push_back(ed.values.segment(lo, len).mean());
    es.multiplicities.push_back(len);
    es.projectors.push_back(basis * basis.transpose());
    es.bases.push_back(std::move(basis));
  }
  es.mu = incoherences(es);
  return es;
}

inline Matrix project_psd(const Matrix& m) {
  require_square(m, "project_psd");
  if (m.rows() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  Vector d = solver.eigenvalues().cwiseMax(0.0);
  const Matrix& v = solver.eigenvectors();
  return v * d.asDiagonal() * v.transpose();
}

namespace detail {

// Least-squares fit of v by a non-increasing sequence (pool adjacent violators).
inline std::vector<double> isotonic_nonincreasing(const std::vector<double>& v) {
  struct Block {
    double sum;
    int count;
    double mean() const { return sum / count; }
  };
  std::vector<Block> blocks;
  blocks.reserve(v.size());
  for (double x : v) {
    blocks.push_back({x, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const Block& b : blocks) out.insert(out.end(), static_cast<std::size_t>(b.count), b.mean());
  return out;
}

}  // namespace detail

// Euclidean projection of x onto {y : y majorized by lam}.
inline Vector project_majorization(const Vector& x, const Vector& lam) {
  if (x.size() != lam.size()) throw DimensionMismatch("project_majorization: length mismatch");
  const int n = static_cast<int>(x.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
  std::vector<double> l(lam.data(), lam.data() + n);
  std::sort(l.begin(), l.end(), std::greater<>());

  std::vector<double> diff(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) diff[static_cast<std::size_t>(k)] = x[order[static_cast<std::size_t>(k)]] - l[static_cast<std::size_t>(k)];
  std::vector<double> theta = detail::isotonic_nonincreasing(diff);

  Vector y(n);
  for (int k = 0; k < n; ++k) {
    const int i = order[static_cast<std::size_t>(k)];
    y[i] = x[i] - theta[static_cast<std::size_t>(k)];
  }
  return y;
}

// True when every top-k sum of x is at most that of lam and totals agree.
inline bool is_majorized(const Vector& x, const Vector& lam, double tol) {
  if (x.size() != lam.size()) throw DimensionMismatch("is_majorized: length mismatch");
  std::vector<double> a(x.data(), x.data() + x.size()), b(lam.data(), lam.data() + lam.size());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sa += a[k];
    sb += b[k];
    if (sa > sb + tol) return false;
  }
  return std::abs(sa - sb) <= tol;
}

// Frobenius projection onto conv{M : spectrum(M) = lam}.
inline Matrix project_schur_horn(const Matrix& m, const Vector& lam) {
  require_square(m, "project_schur_horn");
  if (lam.size() != m.rows()) throw DimensionMismatch("project_schur_horn: spectrum length");
  if (m.rows() == 0) return m;
  EigDecomposition ed = eig_sym(symmetrize(m));
  Vector y = project_majorization(ed.values, lam);
  return ed.vectors * y.asDiagonal() * ed.vectors.transpose();
}

}  // namespace gedlb
