#pragma once

// Operator-splitting solver for cone programs
//
//     minimize  c'x   subject to  Ax + s = b,  s in K,
//
// where K is a product of a zero cone, a nonnegative orthant and PSD cones
// (PSD blocks in scaled symmetric vectorization). ADMM is run on the
// homogeneous self-dual embedding; every iteration costs one solve with a
// fixed quasi-definite system, factored once, plus one cone projection.

#include <gedlb/errors.hpp>
#include <gedlb/linalg.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace gedlb {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

inline constexpr double kSqrt2 = std::numbers::sqrt2;

inline int svec_size(int n) { return n * (n + 1) / 2; }

// Position of entry (i, j), i <= j, in the row-major upper triangle.
inline int svec_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

inline int smat_dim(int len) {
  int n = static_cast<int>(std::lround((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0));
  if (svec_size(n) != len) throw DimensionMismatch("vector length is not triangular");
  return n;
}

inline Vector svec(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("svec: matrix must be square");
  const int n = static_cast<int>(m.rows());
  Vector v(svec_size(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    v[k++] = m(i, i);
    for (int j = i + 1; j < n; ++j) v[k++] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  }
  return v;
}

inline Matrix smat(const Vector& v) {
  const int n = smat_dim(static_cast<int>(v.size()));
  Matrix m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    m(i, i) = v[k++];
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = v[k++] / kSqrt2;
  }
  return m;
}

struct ConeSpec {
  int zero_dim = 0;
  int nonneg_dim = 0;
  std::vector<int> psd_block_sizes;

  int total() const {
    int t = zero_dim + nonneg_dim;
    for (int s : psd_block_sizes) t += svec_size(s);
    return t;
  }
};

struct ConicProblem {
  Vector c;
  SparseMatrix A;
  Vector b;
  ConeSpec cones;
};

enum class SolveStatus { Optimal, MaxIterations, PrimalInfeasibleLikely, DualInfeasibleLikely };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::PrimalInfeasibleLikely: return "primal_infeasible";
    case SolveStatus::DualInfeasibleLikely: return "dual_infeasible";
  }
  return "unknown";
}

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct Solution {
  Vector x, y, s;
  double objective = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
  Residuals residuals;
  int iterations = 0;
};

struct SolverSettings {
  double tol = 1e-6;
  int max_iter = 50000;
  double over_relax = 1.5;
  bool scale = true;
};

namespace detail {

inline void project_psd_segment(double* seg, int n) {
  if (n == 1) {
    seg[0] = std::max(seg[0], 0.0);
    return;
  }
  Matrix m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    m(i, i) = seg[k++];
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = seg[k++] / kSqrt2;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector& d = es.eigenvalues();
  if (d[0] >= 0.0) return;  // already PSD
  const Matrix& v = es.eigenvectors();
  int first = 0;
  while (first < n && d[first] < 0.0) ++first;
  Matrix p = Matrix::Zero(n, n);
  if (first < n) {
    auto vp = v.rightCols(n - first);
    p.noalias() = vp * d.tail(n - first).asDiagonal() * vp.transpose();
  }
  k = 0;
  for (int i = 0; i < n; ++i) {
    seg[k++] = p(i, i);
    for (int j = i + 1; j < n; ++j) seg[k++] = kSqrt2 * p(i, j);
  }
}

}  // namespace detail

// Projection onto K (dual = false) or onto its dual cone K* (dual = true);
// the cones differ only on the zero segment, whose dual is free.
inline Vector project_cone(const ConeSpec& k, const Vector& v, bool dual = false) {
  if (v.size() != k.total()) throw DimensionMismatch("project_cone: vector length");
  Vector out = v;
  if (!dual) out.head(k.zero_dim).setZero();
  int off = k.zero_dim;
  for (int i = 0; i < k.nonneg_dim; ++i, ++off) out[off] = std::max(out[off], 0.0);
  for (int s : k.psd_block_sizes) {
    detail::project_psd_segment(out.data() + off, s);
    off += svec_size(s);
  }
  return out;
}

namespace detail {

// Ruiz equilibration of A: D*A*E with D constant over each PSD block.
struct Scaling {
  Vector d;  // rows
  Vector e;  // columns
};

inline Scaling ruiz(const SparseMatrix& a, const ConeSpec& cones, int sweeps) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  Scaling sc{Vector::Ones(m), Vector::Ones(n)};
  SparseMatrix w = a;
  for (int it = 0; it < sweeps; ++it) {
    Vector rn = Vector::Zero(m), cn = Vector::Zero(n);
    for (int j = 0; j < n; ++j)
      for (SparseMatrix::InnerIterator p(w, j); p; ++p) {
        const double v = std::abs(p.value());
        rn[p.row()] = std::max(rn[p.row()], v);
        cn[j] = std::max(cn[j], v);
      }
    int off = cones.zero_dim + cones.nonneg_dim;
    for (int s : cones.psd_block_sizes) {
      const int len = svec_size(s);
      rn.segment(off, len).setConstant(rn.segment(off, len).maxCoeff());
      off += len;
    }
    Vector dr(m), dc(n);
    for (int i = 0; i < m; ++i) dr[i] = rn[i] > 0.0 ? 1.0 / std::sqrt(rn[i]) : 1.0;
    for (int j = 0; j < n; ++j) dc[j] = cn[j] > 0.0 ? 1.0 / std::sqrt(cn[j]) : 1.0;
    sc.d = (sc.d.array() * dr.array()).cwiseMax(1e-4).cwiseMin(1e4);
    sc.e = (sc.e.array() * dc.array()).cwiseMax(1e-4).cwiseMin(1e4);
    w = sc.d.asDiagonal() * a * sc.e.asDiagonal();
  }
  return sc;
}

}  // namespace detail

class ConicSolver {
 public:
  explicit ConicSolver(const ConicProblem& p, SolverSettings settings = {})
      : settings_(settings), cones_(p.cones) {
    const int m = static_cast<int>(p.A.rows()), n = static_cast<int>(p.A.cols());
    if (p.c.size() != n || p.b.size() != m || cones_.total() != m)
      throw DimensionMismatch("conic problem dimensions are inconsistent: A is " +
                              std::to_string(m) + "x" + std::to_string(n) + ", |b| = " +
                              std::to_string(p.b.size()) + ", |c| = " +
                              std::to_string(p.c.size()) + ", cone dim = " +
                              std::to_string(cones_.total()));
    m_ = m;
    n_ = n;
    if (settings_.scale && m > 0 && n > 0) scaling_ = detail::ruiz(p.A, cones_, 10);
    else scaling_ = {Vector::Ones(m), Vector::Ones(n)};
    a_ = scaling_.d.asDiagonal() * p.A * scaling_.e.asDiagonal();
    at_ = a_.transpose();
    b_ = scaling_.d.cwiseProduct(p.b);
    c_ = scaling_.e.cwiseProduct(p.c);
    b_orig_norm_ = p.b.norm();
    c_orig_norm_ = p.c.norm();
    factor();
  }

  Solution solve() {
    const int n = n_, m = m_, l = n + m + 1;
    const double alpha = settings_.over_relax;
    Vector u = Vector::Zero(l), v = Vector::Zero(l);
    u[l - 1] = 1.0;
    v[l - 1] = 1.0;
    Vector ut(l), rhs(l), urel(l);

    Solution sol;
    int it = 0;
    for (; it < settings_.max_iter; ++it) {
      rhs = u + v;
      solve_linear(rhs, ut);
      urel = alpha * ut + (1.0 - alpha) * u;
      // Projection onto R^n x K* x R+.
      Vector w = urel - v;
      u.head(n) = w.head(n);
      u.segment(n, m) = project_cone(cones_, w.segment(n, m), true);
      u[l - 1] = std::max(w[l - 1], 0.0);
      v += u - urel;

      if (it % 10 == 0 || it + 1 == settings_.max_iter) {
        if (check(u, v, sol)) {
          sol.iterations = it + 1;
          return sol;
        }
      }
    }
    extract(u, v, sol);
    sol.status = SolveStatus::MaxIterations;
    sol.iterations = it;
    return sol;
  }

 private:
  void factor() {
    const int n = n_, m = m_;
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n + m + 2 * a_.nonZeros()));
    for (int j = 0; j < n; ++j) t.emplace_back(j, j, 1.0);
    for (int i = 0; i < m; ++i) t.emplace_back(n + i, n + i, -1.0);
    for (int j = 0; j < n; ++j)
      for (SparseMatrix::InnerIterator p(a_, j); p; ++p) t.emplace_back(n + static_cast<int>(p.row()), j, p.value());
    SparseMatrix k(n + m, n + m);
    k.setFromTriplets(t.begin(), t.end());
    ldlt_.compute(k);
    if (ldlt_.info() != Eigen::Success) throw NumericalBreakdown("quasi-definite factorization failed");
    h_.resize(n + m);
    h_ << c_, b_;
    g_ = solve_im(h_);
    hg_ = 1.0 + h_.dot(g_);
    if (!(std::abs(hg_) > 1e-14)) throw NumericalBreakdown("degenerate embedding system");
  }

  // (I + M)^{-1} r with M = [[0, A'], [-A, 0]].
  Vector solve_im(const Vector& r) const {
    Vector q(n_ + m_);
    q.head(n_) = r.head(n_);
    q.tail(m_) = -r.tail(m_);
    Vector z = ldlt_.solve(q);
    if (ldlt_.info() != Eigen::Success) throw NumericalBreakdown("quasi-definite solve failed");
    return z;
  }

  // (I + Q)^{-1} r for the embedding matrix Q.
  void solve_linear(const Vector& r, Vector& out) const {
    const int nm = n_ + m_;
    const double rt = r[nm];
    Vector z = solve_im(r.head(nm) - rt * h_);
    z -= g_ * (h_.dot(z) / hg_);
    out.head(nm) = z;
    out[nm] = rt + h_.dot(z);
  }

  void extract(const Vector& u, const Vector& v, Solution& sol) const {
    const int n = n_, m = m_;
    const double tau = u[n + m];
    const double inv = tau > 1e-300 ? 1.0 / tau : 0.0;
    sol.x = scaling_.e.cwiseProduct(u.head(n)) * inv;
    sol.y = scaling_.d.cwiseProduct(u.segment(n, m)) * inv;
    sol.s = v.segment(n, m).cwiseQuotient(scaling_.d) * inv;
  }

  // Unscaled convergence and infeasibility tests.
  bool check(const Vector& u, const Vector& v, Solution& sol) const {
    const int n = n_, m = m_;
    const double tau = u[n + m], kappa = v[n + m];
    const double tol = settings_.tol;

    Vector xh = u.head(n), yh = u.segment(n, m), sh = v.segment(n, m);
    if (tau > 1e-12 * std::max(1.0, kappa)) {
      // Residuals of the scaled problem mapped back to original units.
      Vector pr = (a_ * xh + sh - b_ * tau).cwiseQuotient(scaling_.d) / tau;
      Vector dr = (at_ * yh + c_ * tau).cwiseQuotient(scaling_.e) / tau;
      const double cx = c_.dot(xh) / tau, by = b_.dot(yh) / tau;
      sol.residuals.primal = pr.norm() / (1.0 + b_orig_norm_);
      sol.residuals.dual = dr.norm() / (1.0 + c_orig_norm_);
      sol.residuals.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
      if (sol.residuals.primal <= tol && sol.residuals.dual <= tol && sol.residuals.gap <= tol) {
        extract(u, v, sol);
        sol.objective = cx;
        sol.status = SolveStatus::Optimal;
        return true;
      }
    }
    const double by = b_.dot(yh);
    if (by < 0.0) {
      Vector aty = (at_ * yh).cwiseQuotient(scaling_.e);
      if (aty.norm() <= tol * (-by)) {
        sol.y = scaling_.d.cwiseProduct(yh) / (-by);
        sol.x = Vector::Zero(n);
        sol.s = Vector::Zero(m);
        sol.objective = std::numeric_limits<double>::infinity();
        sol.status = SolveStatus::PrimalInfeasibleLikely;
        return true;
      }
    }
    const double cx = c_.dot(xh);
    if (cx < 0.0) {
      Vector axs = (a_ * xh + sh).cwiseQuotient(scaling_.d);
      if (axs.norm() <= tol * (-cx)) {
        sol.x = scaling_.e.cwiseProduct(xh) / (-cx);
        sol.s = sh.cwiseQuotient(scaling_.d) / (-cx);
        sol.y = Vector::Zero(m);
        sol.objective = -std::numeric_limits<double>::infinity();
        sol.status = SolveStatus::DualInfeasibleLikely;
        return true;
      }
    }
    return false;
  }

  SolverSettings settings_;
  ConeSpec cones_;
  int m_ = 0, n_ = 0;
  detail::Scaling scaling_;
  SparseMatrix a_, at_;
  Vector b_, c_, h_, g_;
  double hg_ = 1.0;
  double b_orig_norm_ = 0.0, c_orig_norm_ = 0.0;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

inline Solution solve(const ConicProblem& p, const SolverSettings& settings = {}) {
  return ConicSolver(p, settings).solve();
}

// Affine expression sum(coef * x[var]) + constant.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr& add(int var, double coef) {
    terms.emplace_back(var, coef);
    return *this;
  }
};

// Symmetric matrix variable stored as its upper triangle (i <= j), one
// scalar variable per entry.
struct SymVar {
  int first = 0;
  int n = 0;

  int operator()(int i, int j) const { return first + svec_index(n, i, j); }
  int size() const { return svec_size(n); }
};

// Affine symmetric matrix expression for an LMI, indexed by the upper
// triangle in svec order.
struct AffineSym {
  int n = 0;
  std::vector<LinExpr> entries;

  explicit AffineSym(int dim) : n(dim), entries(static_cast<std::size_t>(svec_size(dim))) {}
  LinExpr& at(int i, int j) { return entries[static_cast<std::size_t>(svec_index(n, i, j))]; }
};

// Assembles a ConicProblem from affine constraints expr = 0, expr >= 0 and
// F(x) PSD, ordering rows by cone.
class ProblemBuilder {
 public:
  int add_variables(int k) {
    const int first = nvars_;
    nvars_ += k;
    c_.resize(static_cast<std::size_t>(nvars_), 0.0);
    return first;
  }

  SymVar add_symmetric(int n) { return SymVar{add_variables(svec_size(n)), n}; }

  void add_objective(int var, double coef) { c_[static_cast<std::size_t>(var)] += coef; }

  int num_variables() const noexcept { return nvars_; }

  void add_zero(const LinExpr& e) { zero_.push_back(e); }
  void add_nonneg(const LinExpr& e) { nonneg_.push_back(e); }
  void add_psd(AffineSym f) { psd_.push_back(std::move(f)); }

  int zero_rows() const noexcept { return static_cast<int>(zero_.size()); }
  int nonneg_rows() const noexcept { return static_cast<int>(nonneg_.size()); }
  int psd_blocks() const noexcept { return static_cast<int>(psd_.size()); }

  ConicProblem build() const {
    ConicProblem p;
    p.cones.zero_dim = static_cast<int>(zero_.size());
    p.cones.nonneg_dim = static_cast<int>(nonneg_.size());
    for (const AffineSym& f : psd_) p.cones.psd_block_sizes.push_back(f.n);
    const int m = p.cones.total();
    p.b = Vector::Zero(m);
    p.c = Eigen::Map<const Vector>(c_.data(), nvars_);
    std::vector<Triplet> t;
    int row = 0;
    auto emit = [&](const LinExpr& e, double scale) {
      for (auto [var, coef] : e.terms) t.emplace_back(row, var, -scale * coef);
      p.b[row] = scale * e.constant;
      ++row;
    };
    for (const LinExpr& e : zero_) emit(e, 1.0);
    for (const LinExpr& e : nonneg_) emit(e, 1.0);
    for (const AffineSym& f : psd_)
      for (int i = 0; i < f.n; ++i)
        for (int j = i; j < f.n; ++j)
          emit(f.entries[static_cast<std::size_t>(svec_index(f.n, i, j))], i == j ? 1.0 : kSqrt2);
    p.A.resize(m, nvars_);
    p.A.setFromTriplets(t.begin(), t.end());
    return p;
  }

 private:
  int nvars_ = 0;
  std::vector<double> c_;
  std::vector<LinExpr> zero_, nonneg_;
  std::vector<AffineSym> psd_;
};

}  // namespace gedlb
