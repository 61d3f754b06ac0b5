#pragma once

// Dual-certificate machinery for exact recovery by the Schur-Horn
// relaxation: the parameters rho and xi, the fractional-contraction
// operator L^alpha, and checkers for the sufficient conditions.

#include <gedlb/errors.hpp>
#include <gedlb/families.hpp>
#include <gedlb/graph.hpp>
#include <gedlb/linalg.hpp>
#include <gedlb/random.hpp>
#include <gedlb/spectra.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gedlb {

struct CertificateParams {
  std::vector<double> alpha;
  std::vector<double> gamma;
};

struct CertificateReport {
  double rho = 0.0;
  double xi_lower = 0.0;
  double xi_upper = 0.0;
  std::map<std::string, bool> flags;
  std::map<std::string, double> margins;
  std::optional<Matrix> Q;
  std::optional<Matrix> Delta;
  bool passed = false;  // conjunction of the five sufficient conditions
};

namespace detail {

inline void check_lengths(const std::vector<double>& v, const EigStructure& es, const char* what) {
  if (static_cast<int>(v.size()) != es.m())
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(es.m()));
}

// X - sum_i alpha_i P_i X P_i.
inline Matrix apply_t(const EigStructure& es, const std::vector<double>& alpha, const Matrix& x) {
  Matrix out = x;
  for (int i = 0; i < es.m(); ++i)
    if (alpha[static_cast<std::size_t>(i)] != 0.0)
      out.noalias() -= alpha[static_cast<std::size_t>(i)] * (es.projectors[static_cast<std::size_t>(i)] * x * es.projectors[static_cast<std::size_t>(i)]);
  return out;
}

inline Matrix mask_of(const EditSet& e) {
  Matrix m = Matrix::Zero(e.n(), e.n());
  for (auto* list : {&e.adds(), &e.deletes()})
    for (const Edge& p : *list) m(p.u, p.v) = m(p.v, p.u) = 1.0;
  return m;
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return eig_sym(symmetrize(m)).values.cwiseAbs().maxCoeff();
}

}  // namespace detail

inline Matrix weighted_projector_sum(const std::vector<double>& coef, const EigStructure& es) {
  detail::check_lengths(coef, es, "coefficient vector");
  Matrix r = Matrix::Zero(es.n(), es.n());
  for (int i = 0; i < es.m(); ++i) r += coef[static_cast<std::size_t>(i)] * es.projectors[static_cast<std::size_t>(i)];
  return r;
}

// ||sum_i gamma_i P_i||_inf (entrywise).
inline double rho(const std::vector<double>& gamma, const EigStructure& es) {
  return max_abs(weighted_projector_sum(gamma, es));
}

namespace detail {

// d * (sum_{i != j} mu_i mu_j + sum_i (1 - alpha_i) mu_i^2).
inline double xi_bound_generic(const std::vector<double>& alpha, int d, const EigStructure& es) {
  double s = 0.0;
  for (int i = 0; i < es.m(); ++i)
    for (int j = 0; j < es.m(); ++j) {
      const double mm = es.mu[static_cast<std::size_t>(i)] * es.mu[static_cast<std::size_t>(j)];
      s += i == j ? (1.0 - alpha[static_cast<std::size_t>(i)]) * mm : mm;
    }
  return d * s;
}

// Mixed sqrt(d)/d bound, valid when alpha is one-hot at index ell.
inline std::optional<double> xi_bound_one_hot(const std::vector<double>& alpha, int d,
                                              const EigStructure& es) {
  int ell = -1;
  for (int i = 0; i < es.m(); ++i) {
    const double a = alpha[static_cast<std::size_t>(i)];
    if (a == 1.0 && ell < 0) ell = i;
    else if (a != 0.0) return std::nullopt;
  }
  if (ell < 0) return std::nullopt;
  double lin = 0.0, quad = 0.0;
  for (int i = 0; i < es.m(); ++i) {
    if (i == ell) continue;
    const double mi = es.mu[static_cast<std::size_t>(i)];
    lin += 2.0 * mi * std::sqrt(static_cast<double>(d));
    quad += mi * mi;
    for (int j = 0; j < es.m(); ++j)
      if (j != i && j != ell) quad += mi * es.mu[static_cast<std::size_t>(j)];
  }
  return lin + quad * d;
}

// Upper bound on max sum_{c<=e} w_ce |W_ce| over symmetric supports with at
// most d nonzeros per row (a diagonal entry uses one slot of its row, an
// off-diagonal entry one slot of each endpoint row): any y >= 0 gives
//   d sum_c y_c + sum_{c<e} (w_ce - y_c - y_e)+ + sum_c (w_cc - y_c)+
// by LP duality. y is chosen by coordinate minimization; cheap but may stall.
inline double bmatching_dual_bound(const Matrix& w_off, const Vector& w_diag, int d) {
  const int n = static_cast<int>(w_diag.size());
  Vector y = Vector::Zero(n);
  auto value = [&]() {
    double v = d * y.sum();
    for (int c = 0; c < n; ++c) {
      v += std::max(0.0, w_diag[c] - y[c]);
      for (int e = c + 1; e < n; ++e) v += std::max(0.0, w_off(c, e) - y[c] - y[e]);
    }
    return v;
  };
  double best = value();
  std::vector<double> bp;
  bp.reserve(static_cast<std::size_t>(n));
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (int c = 0; c < n; ++c) {
      bp.clear();
      bp.push_back(w_diag[c]);
      for (int e = 0; e < n; ++e)
        if (e != c) bp.push_back(w_off(c, e) - y[e]);
      std::nth_element(bp.begin(), bp.begin() + (d - 1), bp.end(), std::greater<>());
      y[c] = std::max(0.0, bp[static_cast<std::size_t>(d - 1)]);
    }
    const double v = value();
    if (v > best - 1e-12 * std::max(1.0, best)) break;
    best = v;
  }
  return std::min(best, value());
}

// Exact optimum of the same LP. On the bipartite double cover (left copy c,
// right copy e, profit w_ce / 2 for c != e and w_cc for c == e, capacity d
// per node and 1 per edge) the LP is a transportation problem, solved by
// successive shortest paths with node potentials.
inline double bmatching_lp_value(const Matrix& w_off, const Vector& w_diag, int d) {
  const int n = static_cast<int>(w_diag.size());
  const double inf = std::numeric_limits<double>::infinity();
  Matrix cost(n, n);  // cost of left c -> right e
  for (int c = 0; c < n; ++c)
    for (int e = 0; e < n; ++e) cost(c, e) = -(c == e ? w_diag[c] : 0.5 * w_off(c, e));
  Eigen::MatrixXi flow = Eigen::MatrixXi::Zero(n, n);
  std::vector<int> left_cap(static_cast<std::size_t>(n), d), right_cap(static_cast<std::size_t>(n), d);
  // Potentials; the source has potential 0 throughout.
  Vector pl = Vector::Zero(n), pr = cost.colwise().minCoeff().transpose();
  double pt = pr.minCoeff();
  Vector dl(n), dr(n);
  std::vector<int> via_r(static_cast<std::size_t>(n)), via_l(static_cast<std::size_t>(n));
  std::vector<char> done_l(static_cast<std::size_t>(n)), done_r(static_cast<std::size_t>(n));
  double total = 0.0;
  while (true) {
    dl.setConstant(inf);
    dr.setConstant(inf);
    std::fill(done_l.begin(), done_l.end(), 0);
    std::fill(done_r.begin(), done_r.end(), 0);
    for (int c = 0; c < n; ++c)
      if (left_cap[static_cast<std::size_t>(c)] > 0) {
        dl[c] = std::max(0.0, -pl[c]);
        via_l[static_cast<std::size_t>(c)] = -1;
      }
    while (true) {
      int side = -1, node = -1;
      double bd = inf;
      for (int c = 0; c < n; ++c)
        if (!done_l[static_cast<std::size_t>(c)] && dl[c] < bd) bd = dl[c], side = 0, node = c;
      for (int e = 0; e < n; ++e)
        if (!done_r[static_cast<std::size_t>(e)] && dr[e] < bd) bd = dr[e], side = 1, node = e;
      if (node < 0) break;
      if (side == 0) {
        done_l[static_cast<std::size_t>(node)] = 1;
        for (int e = 0; e < n; ++e) {
          if (flow(node, e) || done_r[static_cast<std::size_t>(e)]) continue;
          const double nd = bd + std::max(0.0, cost(node, e) + pl[node] - pr[e]);
          if (nd < dr[e]) dr[e] = nd, via_r[static_cast<std::size_t>(e)] = node;
        }
      } else {
        done_r[static_cast<std::size_t>(node)] = 1;
        for (int c = 0; c < n; ++c) {
          if (!flow(c, node) || done_l[static_cast<std::size_t>(c)]) continue;
          const double nd = bd + std::max(0.0, -cost(c, node) + pr[node] - pl[c]);
          if (nd < dl[c]) dl[c] = nd, via_l[static_cast<std::size_t>(c)] = node;
        }
      }
    }
    int end = -1;
    double dt = inf;
    for (int e = 0; e < n; ++e)
      if (right_cap[static_cast<std::size_t>(e)] > 0 && dr[e] < inf) {
        const double nd = dr[e] + std::max(0.0, pr[e] - pt);
        if (nd < dt) dt = nd, end = e;
      }
    if (end < 0) break;
    const double path_cost = dt + pt;  // true cost; source potential is 0
    if (path_cost >= -1e-14) break;
    for (int c = 0; c < n; ++c) pl[c] += std::min(dl[c], dt);
    for (int e = 0; e < n; ++e) pr[e] += std::min(dr[e], dt);
    pt += dt;
    --right_cap[static_cast<std::size_t>(end)];
    int e = end;
    while (true) {
      const int c = via_r[static_cast<std::size_t>(e)];
      flow(c, e) = 1;
      const int back = via_l[static_cast<std::size_t>(c)];
      if (back < 0) {
        --left_cap[static_cast<std::size_t>(c)];
        break;
      }
      flow(c, back) = 0;
      e = back;
    }
    total -= path_cost;
  }
  double achieved = 0.0;
  for (int c = 0; c < n; ++c)
    for (int e = 0; e < n; ++e)
      if (flow(c, e)) achieved -= cost(c, e);
  return std::max(total, achieved);
}

// Entrywise b-matching bound on the restricted gain of X -> X - sum alpha_i P_i X P_i.
inline double xi_bound_bmatching(const std::vector<double>& alpha, int d, const EigStructure& es) {
  const int n = es.n();
  double worst = 0.0;
  Matrix k(n, n), w_off(n, n);
  Vector w_diag(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      // K(c,e) = [c==a][e==b] - sum_i alpha_i P_i(a,c) P_i(e,b).
      k.setZero();
      k(a, b) = 1.0;
      for (int i = 0; i < es.m(); ++i) {
        const double al = alpha[static_cast<std::size_t>(i)];
        if (al == 0.0) continue;
        const Matrix& p = es.projectors[static_cast<std::size_t>(i)];
        k.noalias() -= al * p.col(a) * p.row(b);
      }
      w_off = (k + k.transpose()).cwiseAbs();
      w_diag = k.diagonal().cwiseAbs();
      if (bmatching_dual_bound(w_off, w_diag, d) <= worst) continue;
      worst = std::max(worst, bmatching_lp_value(w_off, w_diag, d));
    }
  return worst;
}

}  // namespace detail

// Certified upper bound on xi(alpha, d, G): the minimum of the generic
// incoherence bound, the one-hot mixed bound (when alpha is one-hot) and an
// entrywise b-matching duality bound.
inline double xi_upper(const std::vector<double>& alpha, int d, const EigStructure& es) {
  detail::check_lengths(alpha, es, "alpha");
  if (d < 1) throw BadParams("d must be at least 1");
  double best = detail::xi_bound_generic(alpha, d, es);
  if (auto oh = detail::xi_bound_one_hot(alpha, d, es)) best = std::min(best, *oh);
  best = std::min(best, detail::xi_bound_bmatching(alpha, d, es));
  return best;
}

// Lower bound on xi(alpha, d, G) from explicit probe matrices: every
// single-pair symmetric matrix plus `probes` random symmetric sign matrices
// with at most d nonzeros per row.
inline double xi_lower(const std::vector<double>& alpha, int d, const EigStructure& es, int probes,
                       std::uint64_t seed) {
  detail::check_lengths(alpha, es, "alpha");
  if (d < 1) throw BadParams("d must be at least 1");
  const int n = es.n();
  double best = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Matrix t = Matrix::Zero(n, n);
      t(a, b) = t(b, a) = 1.0;
      for (int i = 0; i < es.m(); ++i) {
        const double al = alpha[static_cast<std::size_t>(i)];
        if (al == 0.0) continue;
        const Matrix& p = es.projectors[static_cast<std::size_t>(i)];
        Matrix outer = p.col(a) * p.row(b);
        if (a != b) outer += p.col(b) * p.row(a);
        t.noalias() -= al * outer;
      }
      best = std::max(best, max_abs(t));
    }
  Rng rng(seed);
  std::vector<Edge> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  for (int p = 0; p < probes; ++p) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    Matrix w = Matrix::Zero(n, n);
    std::bernoulli_distribution sign(0.5);
    for (const Edge& e : pairs) {
      if (deg[static_cast<std::size_t>(e.u)] >= d || deg[static_cast<std::size_t>(e.v)] >= d) continue;
      ++deg[static_cast<std::size_t>(e.u)];
      ++deg[static_cast<std::size_t>(e.v)];
      w(e.u, e.v) = w(e.v, e.u) = sign(rng) ? 1.0 : -1.0;
    }
    if (max_abs(w) == 0.0) continue;
    best = std::max(best, max_abs(detail::apply_t(es, alpha, w)));
  }
  return best;
}

inline constexpr int kMaxContractionIterations = 100;

// Delta = (sum alpha_i P_ii)(P_Omega Y) where Y solves
// Y = M + (I - sum alpha_i P_ii)(P_Omega Y), by fixed-point iteration.
inline Matrix build_delta(const EigStructure& es, const EditSet& edit, const std::vector<double>& alpha,
                          const Matrix& m, double tol = 1e-12) {
  detail::check_lengths(alpha, es, "alpha");
  if (m.rows() != es.n() || edit.n() != es.n()) throw DimensionMismatch("build_delta: sizes differ");
  const Matrix mask = detail::mask_of(edit);
  Matrix y = m;
  double prev_change = std::numeric_limits<double>::infinity();
  int growth = 0;
  bool converged = false;
  for (int it = 0; it < kMaxContractionIterations; ++it) {
    Matrix next = m + detail::apply_t(es, alpha, y.cwiseProduct(mask));
    const double change = max_abs(Matrix(next - y));
    y = std::move(next);
    if (change <= tol * std::max(1.0, max_abs(m))) {
      converged = true;
      break;
    }
    growth = change >= prev_change ? growth + 1 : 0;
    if (growth >= 5) break;
    prev_change = change;
  }
  if (!converged) throw NotContracting("fixed-point iteration for L^alpha did not contract");
  const Matrix py = y.cwiseProduct(mask);
  Matrix delta = Matrix::Zero(es.n(), es.n());
  for (int i = 0; i < es.m(); ++i) {
    const double al = alpha[static_cast<std::size_t>(i)];
    if (al == 0.0) continue;
    const Matrix& p = es.projectors[static_cast<std::size_t>(i)];
    delta.noalias() += al * (p * py * p);
  }
  return symmetrize(delta);
}

// Q commutes with A and its compressions to the eigenspaces of A are
// strictly ordered: lambda_min(Q|E_i) > lambda_max(Q|E_{i+1}) + tol.
inline bool check_normal_cone(const Matrix& q, const Matrix& a, double tol) {
  if (q.rows() != a.rows() || q.cols() != a.cols()) throw DimensionMismatch("check_normal_cone: sizes differ");
  if (max_abs(Matrix(q * a - a * q)) > tol) return false;
  const EigStructure es = eigenspaces(a);
  double prev_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.m(); ++i) {
    const Matrix& b = es.bases[static_cast<std::size_t>(i)];
    Vector ev = eigenvalues_desc(symmetrize(b.transpose() * q * b));
    if (i > 0 && !(prev_min > ev[0] + tol)) return false;
    prev_min = ev[ev.size() - 1];
  }
  return true;
}

// Evaluates the five sufficient conditions for a given edit pattern with
// R = sum gamma_i P_i, M = sign(E*) - P_Omega(R), Delta = L^alpha(M).
inline CertificateReport check_sufficient(const Graph& g, const EditSet& edit, const CertificateParams& params,
                                          double tol = 1e-8) {
  const Matrix a = adjacency(g);
  const EigStructure es = eigenspaces(a);
  detail::check_lengths(params.alpha, es, "alpha");
  detail::check_lengths(params.gamma, es, "gamma");
  if (edit.n() != g.n()) throw DimensionMismatch("edit set size differs from graph");
  const int m = es.m();
  const int d = std::max(1, edit.max_degree());

  CertificateReport rep;
  const Matrix r = weighted_projector_sum(params.gamma, es);
  const Matrix mask = detail::mask_of(edit);
  const Matrix sign = edit.matrix();
  rep.rho = max_abs(r);
  rep.xi_upper = xi_upper(params.alpha, d, es);
  rep.xi_lower = xi_lower(params.alpha, d, es, 20, 0);

  const Matrix mm = sign - r.cwiseProduct(mask);
  const Matrix delta = build_delta(es, edit, params.alpha, mm);
  const Matrix q = r + delta;
  const Matrix off = Matrix::Ones(g.n(), g.n()) - mask;

  const double c1 = max_abs(Matrix(delta.cwiseProduct(mask) + r.cwiseProduct(mask) - sign));
  rep.margins["omega_match_error"] = c1;
  rep.flags["omega_match"] = c1 <= tol;

  const double c2 = max_abs(Matrix(delta.cwiseProduct(off))) + max_abs(Matrix(r.cwiseProduct(off)));
  rep.margins["off_support"] = 1.0 - c2;
  rep.flags["off_support"] = c2 < 1.0;

  double cross = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j)
        cross = std::max(cross, max_abs(Matrix(es.projectors[static_cast<std::size_t>(i)] * delta *
                                               es.projectors[static_cast<std::size_t>(j)])));
  rep.margins["cross_block"] = cross;
  rep.flags["cross_block"] = cross <= tol;

  std::vector<double> block_norm(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Matrix& p = es.projectors[static_cast<std::size_t>(i)];
    block_norm[static_cast<std::size_t>(i)] = detail::spectral_norm(p * delta * p);
  }
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < m; ++i) {
    const double gap = params.gamma[static_cast<std::size_t>(i + 1)] - params.gamma[static_cast<std::size_t>(i)];
    sep = std::min(sep, gap - block_norm[static_cast<std::size_t>(i)] - block_norm[static_cast<std::size_t>(i + 1)]);
  }
  rep.margins["eigen_separation"] = sep;
  rep.flags["eigen_separation"] = sep > 0.0;

  rep.margins["xi"] = 1.0 - rep.xi_upper;
  rep.flags["xi"] = rep.xi_upper < 1.0;

  rep.passed = rep.flags["omega_match"] && rep.flags["off_support"] && rep.flags["cross_block"] &&
               rep.flags["eigen_separation"] && rep.flags["xi"];
  // Reported separately: whether Q satisfies the normal-cone characterization.
  rep.flags["normal_cone"] = check_normal_cone(q, a, 1e-7);
  rep.Q = q;
  rep.Delta = delta;
  return rep;
}

struct TheoremCheck {
  bool holds = false;
  bool condition1 = false;
  bool condition2 = false;
  double margin1 = 0.0;  // 1 - (2 xi + rho)
  double margin2 = 0.0;  // min_i (gamma_{i+1} - gamma_i - lhs_i)
  double rho = 0.0;
  double xi_upper = 0.0;
};

inline TheoremCheck check_theorem(const EigStructure& es, int d, const CertificateParams& params) {
  detail::check_lengths(params.alpha, es, "alpha");
  detail::check_lengths(params.gamma, es, "gamma");
  TheoremCheck t;
  t.rho = rho(params.gamma, es);
  t.xi_upper = xi_upper(params.alpha, d, es);
  t.margin1 = 1.0 - (2.0 * t.xi_upper + t.rho);
  t.condition1 = t.margin1 > 0.0;
  t.margin2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < es.m(); ++i) {
    const double asum = params.alpha[static_cast<std::size_t>(i)] + params.alpha[static_cast<std::size_t>(i + 1)];
    double lhs;
    if (asum == 0.0) lhs = 0.0;
    else if (t.xi_upper >= 1.0) lhs = std::numeric_limits<double>::infinity();
    else lhs = asum * (1.0 + t.rho) * d / (1.0 - t.xi_upper);
    const double gap = params.gamma[static_cast<std::size_t>(i + 1)] - params.gamma[static_cast<std::size_t>(i)];
    t.margin2 = std::min(t.margin2, gap - lhs);
  }
  t.condition2 = t.margin2 > 0.0;
  t.holds = t.condition1 && t.condition2;
  return t;
}

inline TheoremCheck check_theorem(const Graph& g, int d, const CertificateParams& params) {
  return check_theorem(eigenspaces(adjacency(g)), d, params);
}

inline constexpr double kUniformityTol = 1e-8;

// alpha one-hot at the most incoherent eigenspace; gamma spaced by
// c1 (alpha_i + alpha_{i+1}) / mubar^2 + eps and shifted so gamma_ell = 0.
inline CertificateParams default_params(const EigStructure& es, double c1, double eps) {
  if (!check_projector_diagonal_uniformity(es, kUniformityTol))
    throw NotUniform("eigenspace projectors do not have constant diagonals");
  const int m = es.m();
  if (m < 2) throw BadParams("default_params needs at least two eigenspaces");
  const int ell = es.ell();
  std::vector<double> sorted = es.mu;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double mubar = sorted[1];
  CertificateParams p;
  p.alpha.assign(static_cast<std::size_t>(m), 0.0);
  p.alpha[static_cast<std::size_t>(ell)] = 1.0;
  p.gamma.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i + 1 < m; ++i)
    p.gamma[static_cast<std::size_t>(i + 1)] =
        p.gamma[static_cast<std::size_t>(i)] +
        c1 * (p.alpha[static_cast<std::size_t>(i)] + p.alpha[static_cast<std::size_t>(i + 1)]) / (mubar * mubar) + eps;
  const double shift = p.gamma[static_cast<std::size_t>(ell)];
  for (double& g : p.gamma) g -= shift;
  return p;
}

inline int corollary_bound(const EigStructure& es, double c) {
  if (!check_projector_diagonal_uniformity(es, kUniformityTol))
    throw NotUniform("eigenspace projectors do not have constant diagonals");
  return static_cast<int>(std::floor(c * es.n() / es.kappa()));
}

}  // namespace gedlb
