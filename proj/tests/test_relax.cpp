#include <gedlb/families.hpp>
#include <gedlb/relax.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gedlb;

namespace {

const std::vector<std::vector<SetKind>> kAllKinds = {
    {SetKind::SH}, {SetKind::IS}, {SetKind::MC}, {SetKind::SH, SetKind::IS, SetKind::MC}};

std::string name(const std::vector<SetKind>& kinds) {
  std::string s;
  for (SetKind k : kinds) s += std::string(s.empty() ? "" : "+") + to_string(k);
  return s;
}

}  // namespace

TEST(LowerBound, IdenticalGraphsGiveZero) {
  const Graph g = Graph::cycle(6);
  for (const auto& kinds : kAllKinds) {
    BoundResult r = lower_bound(g, g, kinds);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_NEAR(r.lower_bound, 0.0, 1e-4) << name(kinds);
  }
}

TEST(LowerBound, CospectralPairIsInvisibleToSchurHorn) {
  const Graph star = Graph::star(4);
  const Graph c4k1(5, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  EXPECT_LT(max_abs(Vector(eigenvalues_desc(adjacency(star)) - eigenvalues_desc(adjacency(c4k1)))), 1e-12);
  EXPECT_NEAR(symmetric_lower_bound(star, c4k1, {SetKind::SH}).lower_bound, 0.0, 1e-4);
  EXPECT_GT(exact_ged(star, c4k1), 0);
}

TEST(LowerBound, SoundAgainstExactDistance) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 24; ++t) {
    const int n = 4 + t % 4;
    Graph a = oracle::random_graph(n, 0.5, rng), b = oracle::random_graph(n, 0.5, rng);
    const int ged = exact_ged(a, b);
    for (const auto& kinds : kAllKinds) {
      BoundResult r = symmetric_lower_bound(a, b, kinds);
      EXPECT_LE(r.lower_bound, ged + 1e-4) << name(kinds);
      EXPECT_GE(r.lower_bound, -1e-6);
    }
  }
}

TEST(LowerBound, EditMatrixEstimateIsConsistent) {
  const Graph g = Graph::cycle(5), h = Graph::complete(5);
  BoundResult r = lower_bound(g, h, {SetKind::SH});
  EXPECT_LT(max_abs(Matrix(r.E_hat - (adjacency(h) - r.X_hat))), 1e-5);
  EXPECT_NEAR(r.lower_bound, 0.5 * r.E_hat.cwiseAbs().sum(), 1e-6);
  EXPECT_TRUE(membership(make_set(adjacency(g), SetKind::SH), r.X_hat, 1e-4));
  EXPECT_GT(r.lower_bound, 0.5);
}

TEST(LowerBound, RelabelInvariance) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 6; ++t) {
    Graph a = oracle::random_graph(6, 0.5, rng), b = oracle::random_graph(6, 0.5, rng);
    const Graph pb = b.relabel(oracle::random_permutation(6, rng));
    for (const auto& kinds : kAllKinds)
      EXPECT_NEAR(lower_bound(a, b, kinds).lower_bound, lower_bound(a, pb, kinds).lower_bound, 1e-4) << name(kinds);
  }
}

TEST(LowerBound, IntersectionDominatesEachSet) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 8; ++t) {
    Graph a = oracle::random_graph(6, 0.5, rng), b = oracle::random_graph(6, 0.5, rng);
    const double all = lower_bound(a, b, {SetKind::SH, SetKind::IS, SetKind::MC}).lower_bound;
    for (SetKind k : {SetKind::SH, SetKind::IS, SetKind::MC})
      EXPECT_GE(all, lower_bound(a, b, {k}).lower_bound - 1e-4) << to_string(k);
  }
}

TEST(LowerBound, SymmetricReportsBothDirections) {
  const Graph g = extremal_e(9);
  const Graph h = apply_edits(g, EditSet(9, {}, {g.edges().front()}));
  BoundResult r = symmetric_lower_bound(g, h, {SetKind::IS});
  EXPECT_EQ(r.direction, Direction::MaxOfBoth);
  EXPECT_NEAR(r.lower_bound, std::max(r.forward, r.backward), 1e-12);
  EXPECT_EQ(r.achieved_by, r.forward >= r.backward ? Direction::G1toG2 : Direction::G2toG1);
  EXPECT_THROW(lower_bound(g, Graph::complete(4), {SetKind::IS}), DimensionMismatch);
}

TEST(LowerBound, InverseStabilityTangentBehaviour) {
  const Graph g = extremal_e(9);
  const Edge tri = g.edges().front();
  const double del = lower_bound(g, apply_edits(g, EditSet(9, {}, {tri})), {SetKind::IS}).lower_bound;
  EXPECT_GT(del, 1e-3);
  EXPECT_LE(del, 1.0 + 1e-4);
  // Additions lie in the tangent cone and the bound vanishes.
  for (const Edge& e : {g.non_edges()[0], g.non_edges()[5], g.non_edges()[11]}) {
    ASSERT_TRUE(check_is_tangent(g, EditSet(9, {e}, {}).matrix(), 1e-6));
    EXPECT_NEAR(lower_bound(g, apply_edits(g, EditSet(9, {e}, {})), {SetKind::IS}).lower_bound, 0.0, 1e-4);
  }
}

TEST(LowerBoundExt, CostScalingAndSoundness) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 8; ++t) {
    Graph a = oracle::random_graph(3 + t % 3, 0.5, rng), b = oracle::random_graph(4 + t % 2, 0.5, rng);
    const int ged = exact_ged_ext(a, b);
    for (const auto& kinds : kAllKinds) {
      const double raw = lower_bound_ext(a, b, kinds).lower_bound;
      EXPECT_NEAR(lower_bound_ext(a, b, kinds, 3.0).lower_bound, 3.0 * raw, 1e-5) << name(kinds);
      EXPECT_LE(raw, ged + 1e-4) << name(kinds);
    }
  }
}

TEST(LowerBoundExt, Examples) {
  const double v = lower_bound_ext(Graph::complete(2), Graph::complete(3), {SetKind::SH}).lower_bound;
  EXPECT_GT(v, 0.5);
  EXPECT_LE(v, 3.0 + 1e-4);
  EXPECT_NEAR(lower_bound_ext(Graph::cycle(4), Graph::cycle(4), {SetKind::MC}).lower_bound, 0.0, 1e-4);
  EXPECT_THROW(lower_bound_ext(Graph::cycle(4), Graph::cycle(4), {SetKind::Loopless}), BadParams);
}

TEST(ShAdmm, AgreesWithConicSolver) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    const int n = 5 + t % 4;
    Graph a = oracle::random_graph(n, 0.5, rng), b = oracle::random_graph(n, 0.5, rng);
    SolverSettings cs;
    cs.tol = 1e-7;
    const double conic = lower_bound(a, b, {SetKind::SH}, cs).lower_bound;
    AdmmSettings as;
    as.tol = 1e-7;
    ShAdmmResult r = sh_admm(a, b, as);
    EXPECT_NEAR(r.lower_bound, conic, 1e-4 * std::max(1.0, conic));
    EXPECT_LE(r.dual_bound, r.primal_value + 1e-9);
    EXPECT_TRUE(membership(make_set(adjacency(a), SetKind::SH), r.X_hat, 1e-6));
  }
  EXPECT_THROW(sh_admm(Graph::cycle(4), Graph::cycle(5)), DimensionMismatch);
}

TEST(ShAdmm, RecoversSparseEditsOnTriangularGraph) {
  const Graph t9 = triangular(9);
  int recovered = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const EditSet e = random_edits(t9, 4, 0.5, derive_seed(7, {s}));
    ShAdmmResult r = sh_admm(t9, apply_edits(t9, e));
    recovered += success_check(r.E_hat, e.matrix());
    EXPECT_NEAR(r.lower_bound, 4.0, 0.05);
  }
  EXPECT_GE(recovered, 4);
}

TEST(SuccessCheck, Threshold) {
  Matrix e = Matrix::Zero(3, 3);
  e(0, 1) = e(1, 0) = 1.0;
  EXPECT_TRUE(success_check(e, e));
  Matrix f = e;
  f(2, 2) = 0.009;
  EXPECT_TRUE(success_check(f, e));
  f(2, 2) = 0.011;
  EXPECT_FALSE(success_check(f, e));
  EXPECT_THROW(success_check(Matrix::Zero(2, 2), e), DimensionMismatch);
}
