#pragma once

// Convex relaxations of graph edit distance:
//
//   (P)      min 1/2 ||E||_1        s.t. X + E = A2, X in C(G1)
//   (P_ext)  min sum_{i<=j} |E_ij|  s.t. X + E = A2 (vertex-indexed),
//            X in C(G1), 0 <= X <= 1, X_ij <= X_ii, X_ij <= X_jj
//
// solved through the conic solver, plus a two-block ADMM specialized to the
// Schur-Horn orbitope.

#include <gedlb/conic.hpp>
#include <gedlb/errors.hpp>
#include <gedlb/graph.hpp>
#include <gedlb/linalg.hpp>
#include <gedlb/sets.hpp>
#include <gedlb/spectra.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace gedlb {

enum class Direction { G1toG2, G2toG1, MaxOfBoth };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::G1toG2: return "g1_to_g2";
    case Direction::G2toG1: return "g2_to_g1";
    case Direction::MaxOfBoth: return "max_of_both";
  }
  return "?";
}

struct BoundResult {
  double lower_bound = 0.0;  // raw edit units unless scaled by the caller
  Matrix E_hat;
  Matrix X_hat;
  SolveStatus status = SolveStatus::Optimal;
  Direction direction = Direction::G1toG2;
  // Set for symmetric bounds: per-direction values and the achieving one.
  double forward = 0.0;
  double backward = 0.0;
  Direction achieved_by = Direction::G1toG2;
  int iterations = 0;
};

struct PFormulation {
  ConicProblem problem;
  SymVar x, e_plus, e_minus;
  std::vector<ConstraintBlock> blocks;
};

namespace detail {

inline Matrix read_sym(const Vector& sol, const SymVar& v) {
  Matrix m(v.n, v.n);
  for (int i = 0; i < v.n; ++i)
    for (int j = i; j < v.n; ++j) m(i, j) = m(j, i) = sol[v(i, j)];
  return m;
}

// Variables X, E+, E- with X + E+ - E- = a2 and E+/- >= 0; objective
// weight w_diag on diagonal entries and 1 elsewhere.
inline PFormulation split_formulation(const Matrix& a2, double w_diag, ProblemBuilder& pb) {
  const int n = static_cast<int>(a2.rows());
  PFormulation f;
  f.x = pb.add_symmetric(n);
  f.e_plus = pb.add_symmetric(n);
  f.e_minus = pb.add_symmetric(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double w = i == j ? w_diag : 1.0;
      pb.add_objective(f.e_plus(i, j), w);
      pb.add_objective(f.e_minus(i, j), w);
      pb.add_nonneg(LinExpr{}.add(f.e_plus(i, j), 1.0));
      pb.add_nonneg(LinExpr{}.add(f.e_minus(i, j), 1.0));
      LinExpr eq;
      eq.add(f.x(i, j), 1.0).add(f.e_plus(i, j), 1.0).add(f.e_minus(i, j), -1.0);
      eq.constant = -0.5 * (a2(i, j) + a2(j, i));
      pb.add_zero(eq);
    }
  return f;
}

inline BoundResult solve_formulation(const PFormulation& f, const SolverSettings& settings,
                                     bool extended) {
  Solution s = solve(f.problem, settings);
  if (s.status == SolveStatus::PrimalInfeasibleLikely || s.status == SolveStatus::DualInfeasibleLikely)
    throw SolverFailure(std::string("relaxation solve ended with status ") + to_string(s.status));
  BoundResult r;
  r.status = s.status;
  r.iterations = s.iterations;
  r.X_hat = read_sym(s.x, f.x);
  r.E_hat = read_sym(s.x, f.e_plus) - read_sym(s.x, f.e_minus);
  if (extended) r.lower_bound = r.E_hat.triangularView<Eigen::Upper>().toDenseMatrix().cwiseAbs().sum();
  else r.lower_bound = 0.5 * r.E_hat.cwiseAbs().sum();
  return r;
}

inline BoundResult max_of(BoundResult fwd, BoundResult bwd) {
  const double a = fwd.lower_bound, b = bwd.lower_bound;
  BoundResult r = a >= b ? std::move(fwd) : std::move(bwd);
  r.forward = a;
  r.backward = b;
  r.achieved_by = a >= b ? Direction::G1toG2 : Direction::G2toG1;
  r.direction = Direction::MaxOfBoth;
  return r;
}

}  // namespace detail

inline PFormulation formulate_p(const Matrix& a2, const InvariantSet& set_g1) {
  require_square(a2, "formulate_p");
  ProblemBuilder pb;
  PFormulation f = detail::split_formulation(a2, 0.5, pb);
  f.blocks = emit_conic_blocks(set_g1, pb, f.x);
  f.problem = pb.build();
  return f;
}

// Bound for a set already built from the source graph; lets callers reuse
// the set across many targets.
inline BoundResult lower_bound(const InvariantSet& set_g1, const Graph& g2, const SolverSettings& settings = {}) {
  BoundResult r = detail::solve_formulation(formulate_p(adjacency(g2), set_g1), settings, false);
  r.direction = Direction::G1toG2;
  r.forward = r.lower_bound;
  return r;
}

inline BoundResult lower_bound(const Graph& g1, const Graph& g2, const std::vector<SetKind>& kinds,
                               const SolverSettings& settings = {}) {
  if (g1.n() != g2.n()) throw DimensionMismatch("lower_bound needs equal vertex counts");
  return lower_bound(make_set(adjacency(g1), kinds), g2, settings);
}

inline BoundResult symmetric_lower_bound(const Graph& g1, const Graph& g2,
                                         const std::vector<SetKind>& kinds,
                                         const SolverSettings& settings = {}) {
  BoundResult fwd = lower_bound(g1, g2, kinds, settings);
  BoundResult bwd = lower_bound(g2, g1, kinds, settings);
  bwd.direction = Direction::G2toG1;
  return detail::max_of(std::move(fwd), std::move(bwd));
}

inline PFormulation formulate_p_ext(const VertexIndexedAdjacency& a1v,
                                    const VertexIndexedAdjacency& a2v,
                                    const InvariantSet& set_g1) {
  if (a1v.dim() != a2v.dim()) throw DimensionMismatch("formulate_p_ext: padded sizes differ");
  for (const SetAtom& atom : set_g1.parts())
    if (std::holds_alternative<Loopless>(atom))
      throw BadParams("the loopless set excludes vertex-indexed matrices");
  const int n = a1v.dim();
  ProblemBuilder pb;
  PFormulation f = detail::split_formulation(a2v.matrix(), 1.0, pb);
  f.blocks = emit_conic_blocks(set_g1, pb, f.x);
  bool has_box = false;
  for (const SetAtom& atom : set_g1.parts()) has_box |= std::holds_alternative<Box01>(atom);
  if (!has_box) {
    auto box = emit_conic_blocks(InvariantSet(Box01{}), pb, f.x);
    f.blocks.insert(f.blocks.end(), box.begin(), box.end());
  }
  int coupling = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      pb.add_nonneg(LinExpr{}.add(f.x(i, i), 1.0).add(f.x(i, j), -1.0));
      pb.add_nonneg(LinExpr{}.add(f.x(j, j), 1.0).add(f.x(i, j), -1.0));
      coupling += 2;
    }
  if (coupling > 0) f.blocks.push_back({ConstraintKind::Nonneg, coupling});
  f.problem = pb.build();
  return f;
}

// Bound with vertex edits allowed: both directions over padded
// vertex-indexed matrices, maximum reported and scaled by cost_per_edit.
inline BoundResult lower_bound_ext(const Graph& g1, const Graph& g2, const std::vector<SetKind>& kinds,
                                   double cost_per_edit = 1.0, const SolverSettings& settings = {}) {
  const int n = std::max(g1.n(), g2.n());
  auto a1 = VertexIndexedAdjacency::from_graph(g1, n);
  auto a2 = VertexIndexedAdjacency::from_graph(g2, n);
  BoundResult fwd = detail::solve_formulation(formulate_p_ext(a1, a2, make_set(a1.matrix(), kinds)), settings, true);
  BoundResult bwd = detail::solve_formulation(formulate_p_ext(a2, a1, make_set(a2.matrix(), kinds)), settings, true);
  fwd.direction = Direction::G1toG2;
  bwd.direction = Direction::G2toG1;
  BoundResult r = detail::max_of(std::move(fwd), std::move(bwd));
  r.lower_bound *= cost_per_edit;
  r.forward *= cost_per_edit;
  r.backward *= cost_per_edit;
  return r;
}

struct AdmmSettings {
  double rho = 1.0;
  bool adapt_rho = true;
  double tol = 1e-6;  // relative duality gap
  int max_iter = 20000;
  int check_every = 10;
};

struct ShAdmmResult : BoundResult {
  double dual_bound = 0.0;  // certified lower bound from the dual iterate
  double primal_value = 0.0;
};

// min 1/2 ||a2 - X||_1 over X in the Schur-Horn orbitope of lam.
// Iterates X <- P_SH(a2 - E - U), E <- soft(a2 - X - U, 1/(2 rho)),
// U <- U + X + E - a2. Stops when the primal value and the dual value of the
// scaled multiplier agree to tol (relative).
inline ShAdmmResult sh_admm(const Matrix& a2, const Vector& lam, const AdmmSettings& settings = {}) {
  require_square(a2, "sh_admm");
  const int n = static_cast<int>(a2.rows());
  if (lam.size() != n) throw DimensionMismatch("sh_admm: spectrum length differs from n");
  Vector lam_sorted = lam;
  std::sort(lam_sorted.data(), lam_sorted.data() + n, std::greater<>());

  ShAdmmResult r;
  r.direction = Direction::G1toG2;
  if (n == 0) return r;

  double rho = settings.rho;
  Matrix x = project_schur_horn(a2, lam_sorted);
  Matrix e = a2 - x;
  Matrix u = Matrix::Zero(n, n);
  Matrix e_prev;
  const double a2_norm = a2.norm();

  auto primal_value = [&](const Matrix& xx) { return 0.5 * (a2 - xx).cwiseAbs().sum(); };
  // Dual value of W with |W_ij| <= 1/2: <W, a2> - max over the orbitope of <W, X>.
  auto dual_value = [&](Matrix w) {
    w = symmetrize(w).cwiseMax(-0.5).cwiseMin(0.5);
    Vector ev = eigenvalues_desc(w);
    return (w.cwiseProduct(a2)).sum() - ev.dot(lam_sorted);
  };

  r.status = SolveStatus::MaxIterations;
  double best_dual = -std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < settings.max_iter; ++it) {
    x = project_schur_horn(a2 - e - u, lam_sorted);
    e_prev = e;
    const Matrix v = a2 - x - u;
    const double thr = 0.5 / rho;
    e = v.unaryExpr([thr](double t) { return t > thr ? t - thr : (t < -thr ? t + thr : 0.0); });
    const Matrix resid = x + e - a2;
    u += resid;

    if (it % settings.check_every == 0) {
      const double p = primal_value(x);
      best_dual = std::max(best_dual, dual_value(-rho * u));
      if (p - best_dual <= settings.tol * (1.0 + std::abs(p))) {
        r.status = SolveStatus::Optimal;
        ++it;
        break;
      }
      if (settings.adapt_rho) {
        const double rp = resid.norm() / (1.0 + a2_norm);
        const double rd = rho * (e - e_prev).norm() / (1.0 + a2_norm);
        if (rp > 10.0 * rd) {
          rho *= 2.0;
          u /= 2.0;
        } else if (rd > 10.0 * rp) {
          rho /= 2.0;
          u *= 2.0;
        }
      }
    }
  }
  r.iterations = it;
  r.X_hat = x;
  r.E_hat = a2 - x;
  r.primal_value = primal_value(x);
  r.dual_bound = std::max(best_dual, dual_value(-rho * u));
  r.lower_bound = r.primal_value;
  r.forward = r.lower_bound;
  return r;
}

inline ShAdmmResult sh_admm(const Graph& g1, const Graph& g2, const AdmmSettings& settings = {}) {
  if (g1.n() != g2.n()) throw DimensionMismatch("sh_admm needs equal vertex counts");
  return sh_admm(adjacency(g2), eigenvalues_desc(adjacency(g1)), settings);
}

inline constexpr double kSuccessThreshold = 0.01;

inline bool success_check(const Matrix& e_hat, const Matrix& e_star) {
  if (e_hat.rows() != e_star.rows() || e_hat.cols() != e_star.cols())
    throw DimensionMismatch("success_check: sizes differ");
  return max_abs(Matrix(e_hat - e_star)) < kSuccessThreshold;
}

}  // namespace gedlb
