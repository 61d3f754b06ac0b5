#pragma once

// Invariant convex sets of symmetric matrices: the Schur-Horn orbitope, the
// inverse-stability and max-cut sublevel sets, and the box/loopless sets.
// Each set evaluates membership directly and emits conic constraints over a
// symmetric matrix variable.

#include <gedlb/conic.hpp>
#include <gedlb/errors.hpp>
#include <gedlb/graph.hpp>
#include <gedlb/linalg.hpp>
#include <gedlb/spectra.hpp>

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace gedlb {

enum class SetKind { SH, IS, MC, Box, Loopless };

inline const char* to_string(SetKind k) {
  switch (k) {
    case SetKind::SH: return "sh";
    case SetKind::IS: return "is";
    case SetKind::MC: return "mc";
    case SetKind::Box: return "box";
    case SetKind::Loopless: return "loopless";
  }
  return "?";
}

inline SetKind parse_set_kind(const std::string& s) {
  if (s == "sh") return SetKind::SH;
  if (s == "is") return SetKind::IS;
  if (s == "mc") return SetKind::MC;
  if (s == "box") return SetKind::Box;
  if (s == "loopless") return SetKind::Loopless;
  throw BadParams("unknown set kind '" + s + "'");
}

struct SchurHorn {
  Vector lam;  // descending
};
struct InvStability {
  double level = 1.0;
};
struct MaxCut {
  double level = 0.0;
};
struct Box01 {};
struct Loopless {};

using SetAtom = std::variant<SchurHorn, InvStability, MaxCut, Box01, Loopless>;

// A single set or a flat intersection of sets.
class InvariantSet {
 public:
  template <class Atom>
    requires std::is_constructible_v<SetAtom, Atom>
  InvariantSet(Atom atom) : parts_{SetAtom(std::move(atom))} {  // NOLINT
    validate();
  }

  static InvariantSet intersection(std::vector<SetAtom> parts) {
    if (parts.empty()) throw BadParams("intersection needs at least one set");
    InvariantSet s;
    s.parts_ = std::move(parts);
    s.validate();
    return s;
  }

  const std::vector<SetAtom>& parts() const noexcept { return parts_; }
  bool is_intersection() const noexcept { return parts_.size() > 1; }

 private:
  InvariantSet() = default;

  void validate() const {
    for (const SetAtom& a : parts_) {
      if (auto* sh = std::get_if<SchurHorn>(&a)) {
        for (Eigen::Index i = 1; i < sh->lam.size(); ++i)
          if (sh->lam[i] > sh->lam[i - 1]) throw BadParams("Schur-Horn spectrum must be sorted descending");
      } else if (auto* is = std::get_if<InvStability>(&a)) {
        if (!(is->level > 0.0 && is->level <= 1.0 + 1e-9))
          throw BadParams("inverse-stability level must lie in (0,1]");
      } else if (auto* mc = std::get_if<MaxCut>(&a)) {
        if (!(mc->level >= -1e-9)) throw BadParams("max-cut level must be nonnegative");
      }
    }
  }

  std::vector<SetAtom> parts_;
};

namespace detail {

// Coefficient of X(i,j), i <= j, in <C, X> for symmetric C.
inline double inner_weight(int i, int j) { return i == j ? 1.0 : 2.0; }

inline void add_inner(ProblemBuilder& pb, const SymVar& x, const Matrix& c, double scale) {
  for (int i = 0; i < x.n; ++i)
    for (int j = i; j < x.n; ++j)
      if (c(i, j) != 0.0) pb.add_objective(x(i, j), scale * inner_weight(i, j) * c(i, j));
}

inline constexpr SolverSettings kInvariantSettings{1e-7, 200000, 1.5, true};

inline void require_solved(const Solution& s, const char* what) {
  if (s.status != SolveStatus::Optimal)
    throw SolverFailure(std::string(what) + ": solver returned " + to_string(s.status));
}

}  // namespace detail

// min Tr(X(I+A)) over X PSD, X >= 0 entrywise, 1'X1 = 1.
inline double f_value(const Matrix& a) {
  require_square(a, "f_value");
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw BadParams("f_value of an empty matrix");
  ProblemBuilder pb;
  SymVar x = pb.add_symmetric(n);
  detail::add_inner(pb, x, Matrix::Identity(n, n) + a, 1.0);
  LinExpr total;
  total.constant = -1.0;
  AffineSym f(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      total.add(x(i, j), detail::inner_weight(i, j));
      pb.add_nonneg(LinExpr{}.add(x(i, j), 1.0));
      f.at(i, j).add(x(i, j), 1.0);
    }
  pb.add_zero(total);
  pb.add_psd(std::move(f));
  Solution s = solve(pb.build(), detail::kInvariantSettings);
  detail::require_solved(s, "f_value");
  return s.objective;
}

// max 1/4 Tr(A(11' - X)) over X PSD with unit diagonal.
inline double g_value(const Matrix& a) {
  require_square(a, "g_value");
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 0.0;
  if (max_abs(a) == 0.0) return 0.0;
  ProblemBuilder pb;
  SymVar x = pb.add_symmetric(n);
  detail::add_inner(pb, x, a, 0.25);
  AffineSym f(n);
  for (int i = 0; i < n; ++i) {
    LinExpr e;
    e.add(x(i, i), 1.0).constant = -1.0;
    pb.add_zero(e);
    for (int j = i; j < n; ++j) f.at(i, j).add(x(i, j), 1.0);
  }
  pb.add_psd(std::move(f));
  Solution s = solve(pb.build(), detail::kInvariantSettings);
  detail::require_solved(s, "g_value");
  return 0.25 * a.sum() - s.objective;
}

// Builds the set of the given kind around a (vertex-indexed or plain)
// adjacency matrix.
inline InvariantSet make_set(const Matrix& a, SetKind kind) {
  switch (kind) {
    case SetKind::SH: return SchurHorn{eigenvalues_desc(a)};
    case SetKind::IS: return InvStability{std::min(1.0, f_value(a))};
    case SetKind::MC: return MaxCut{std::max(0.0, g_value(a))};
    case SetKind::Box: return Box01{};
    case SetKind::Loopless: return Loopless{};
  }
  throw BadParams("unknown set kind");
}

inline InvariantSet make_set(const Graph& g, SetKind kind) { return make_set(adjacency(g), kind); }

inline InvariantSet make_set(const Matrix& a, const std::vector<SetKind>& kinds) {
  if (kinds.empty()) throw BadParams("no set kinds given");
  std::vector<SetAtom> parts;
  for (SetKind k : kinds) parts.push_back(make_set(a, k).parts().front());
  return InvariantSet::intersection(std::move(parts));
}

enum class ConstraintKind { Equality, Nonneg, Lmi, AuxPsd };

struct ConstraintBlock {
  ConstraintKind kind;
  int size;  // row count for Equality/Nonneg, matrix side for Lmi/AuxPsd
};

// Appends the constraints "x in s" to the builder and returns a summary of
// the blocks emitted.
inline std::vector<ConstraintBlock> emit_conic_blocks(const InvariantSet& s, ProblemBuilder& pb,
                                                      const SymVar& x) {
  const int n = x.n;
  std::vector<ConstraintBlock> blocks;
  for (const SetAtom& atom : s.parts()) {
    if (auto* sh = std::get_if<SchurHorn>(&atom)) {
      if (sh->lam.size() != n) throw DimensionMismatch("Schur-Horn spectrum length differs from n");
      LinExpr trace;
      trace.constant = -sh->lam.sum();
      for (int i = 0; i < n; ++i) trace.add(x(i, i), 1.0);
      pb.add_zero(trace);
      blocks.push_back({ConstraintKind::Equality, 1});
      double prefix = 0.0;
      for (int k = 1; k < n; ++k) {
        prefix += sh->lam[k - 1];
        const int z = pb.add_variables(1);
        SymVar zz = pb.add_symmetric(n);
        AffineSym lmi(n), aux(n);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            lmi.at(i, j).add(zz(i, j), 1.0).add(x(i, j), -1.0);
            aux.at(i, j).add(zz(i, j), 1.0);
          }
        for (int i = 0; i < n; ++i) lmi.at(i, i).add(z, 1.0);
        pb.add_psd(std::move(lmi));
        pb.add_psd(std::move(aux));
        LinExpr budget;
        budget.constant = prefix;
        budget.add(z, -static_cast<double>(k));
        for (int i = 0; i < n; ++i) budget.add(zz(i, i), -1.0);
        pb.add_nonneg(budget);
        blocks.push_back({ConstraintKind::Lmi, n});
        blocks.push_back({ConstraintKind::AuxPsd, n});
        blocks.push_back({ConstraintKind::Nonneg, 1});
      }
    } else if (auto* is = std::get_if<InvStability>(&atom)) {
      SymVar mu = pb.add_symmetric(n);
      AffineSym lmi(n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          pb.add_nonneg(LinExpr{}.add(mu(i, j), 1.0));
          LinExpr& e = lmi.at(i, j);
          e.add(x(i, j), 1.0).add(mu(i, j), -1.0);
          e.constant = (i == j ? 1.0 : 0.0) - is->level;
        }
      pb.add_psd(std::move(lmi));
      blocks.push_back({ConstraintKind::Nonneg, svec_size(n)});
      blocks.push_back({ConstraintKind::Lmi, n});
    } else if (auto* mc = std::get_if<MaxCut>(&atom)) {
      const int d = pb.add_variables(n);
      AffineSym lmi(n);
      LinExpr budget;
      budget.constant = mc->level;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          lmi.at(i, j).add(x(i, j), 1.0);
          budget.add(x(i, j), -0.25 * detail::inner_weight(i, j));
        }
        lmi.at(i, i).add(d + i, -1.0);
        budget.add(d + i, 0.25);
      }
      pb.add_psd(std::move(lmi));
      pb.add_nonneg(budget);
      blocks.push_back({ConstraintKind::Lmi, n});
      blocks.push_back({ConstraintKind::Nonneg, 1});
    } else if (std::holds_alternative<Box01>(atom)) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          pb.add_nonneg(LinExpr{}.add(x(i, j), 1.0));
          LinExpr upper;
          upper.add(x(i, j), -1.0).constant = 1.0;
          pb.add_nonneg(upper);
        }
      blocks.push_back({ConstraintKind::Nonneg, 2 * svec_size(n)});
    } else {
      for (int i = 0; i < n; ++i) pb.add_zero(LinExpr{}.add(x(i, i), 1.0));
      blocks.push_back({ConstraintKind::Equality, n});
    }
  }
  return blocks;
}

inline bool membership(const InvariantSet& s, const Matrix& m, double tol) {
  require_square(m, "membership");
  const int n = static_cast<int>(m.rows());
  for (const SetAtom& atom : s.parts()) {
    if (auto* sh = std::get_if<SchurHorn>(&atom)) {
      if (sh->lam.size() != n) throw DimensionMismatch("Schur-Horn spectrum length differs from n");
      if (!is_majorized(eigenvalues_desc(m), sh->lam, tol)) return false;
    } else if (auto* is = std::get_if<InvStability>(&atom)) {
      if (f_value(m) < is->level - tol) return false;
    } else if (auto* mc = std::get_if<MaxCut>(&atom)) {
      if (g_value(m) > mc->level + tol) return false;
    } else if (std::holds_alternative<Box01>(atom)) {
      if (m.minCoeff() < -tol || m.maxCoeff() > 1.0 + tol) return false;
    } else {
      if (max_abs(Vector(m.diagonal())) > tol) return false;
    }
  }
  return true;
}

// Smallest t such that T + I + A - f(A) 11' + tI = mu + Lambda with mu >= 0
// entrywise and Lambda PSD; T lies in the tangent cone of the
// inverse-stability set at A exactly when t <= 0.
inline double is_tangent_slack(const Graph& g, const Matrix& t) {
  const int n = g.n();
  if (t.rows() != n || t.cols() != n) throw DimensionMismatch("tangent direction size");
  const Matrix a = adjacency(g);
  const double f = f_value(a);
  const Matrix base = t + Matrix::Identity(n, n) + a - f * Matrix::Ones(n, n);
  ProblemBuilder pb;
  const int tv = pb.add_variables(1);
  pb.add_objective(tv, 1.0);
  SymVar mu = pb.add_symmetric(n);
  AffineSym lmi(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      pb.add_nonneg(LinExpr{}.add(mu(i, j), 1.0));
      LinExpr& e = lmi.at(i, j);
      e.add(mu(i, j), -1.0).constant = 0.5 * (base(i, j) + base(j, i));
      if (i == j) e.add(tv, 1.0);
    }
  pb.add_psd(std::move(lmi));
  Solution s = solve(pb.build(), detail::kInvariantSettings);
  detail::require_solved(s, "is_tangent_slack");
  return s.objective;
}

inline bool check_is_tangent(const Graph& g, const Matrix& t, double tol) {
  return is_tangent_slack(g, t) <= tol;
}

}  // namespace gedlb
