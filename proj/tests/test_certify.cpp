#include <gedlb/certify.hpp>
#include <gedlb/families.hpp>
#include <gedlb/relax.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gedlb;

namespace {

// T(X) = X - sum alpha_i P_i X P_i, written out directly.
Matrix apply_t(const EigStructure& es, const std::vector<double>& alpha, const Matrix& x) {
  Matrix out = x;
  for (int i = 0; i < es.m(); ++i) {
    const Matrix& p = es.projectors[static_cast<std::size_t>(i)];
    out -= alpha[static_cast<std::size_t>(i)] * p * x * p;
  }
  return out;
}

// Exact xi by enumerating every symmetric {-1, 0, 1} matrix whose rows have
// at most d nonzeros; the supremum of a convex function over the polytope
// is attained at one of these vertices.
double xi_brute_force(const EigStructure& es, const std::vector<double>& alpha, int d) {
  const int n = es.n();
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) cells.emplace_back(i, j);
  const int k = static_cast<int>(cells.size());
  int total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  double best = 0.0;
  for (int code = 0; code < total; ++code) {
    Matrix x = Matrix::Zero(n, n);
    int c = code;
    for (auto [i, j] : cells) {
      const int v = c % 3 - 1;
      c /= 3;
      x(i, j) = x(j, i) = v;
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = (x.row(i).array() != 0.0).count() <= d;
    if (!ok) continue;
    best = std::max(best, max_abs(apply_t(es, alpha, x)));
  }
  return best;
}

std::vector<double> one_hot(int m, int at) {
  std::vector<double> a(static_cast<std::size_t>(m), 0.0);
  a[static_cast<std::size_t>(at)] = 1.0;
  return a;
}

bool five_conditions(const CertificateReport& r) {
  for (const char* k : {"omega_match", "off_support", "cross_block", "eigen_separation", "xi"})
    if (!r.flags.at(k)) return false;
  return true;
}

}  // namespace

TEST(Rho, Examples) {
  EigStructure k3 = eigenspaces(adjacency(Graph::complete(3)));
  EXPECT_NEAR(rho({0.0, 1.0}, k3), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rho({3.0, 0.0}, k3), 1.0, 1e-12);
  EXPECT_NEAR(rho({1.0, 1.0}, k3), 1.0, 1e-12);
  EXPECT_THROW(rho({1.0}, k3), DimensionMismatch);
}

TEST(Xi, ZeroAlphaIsIdentity) {
  EigStructure es = eigenspaces(adjacency(triangular(5)));
  const std::vector<double> zero(static_cast<std::size_t>(es.m()), 0.0);
  EXPECT_DOUBLE_EQ(xi_lower(zero, 1, es, 10, 3), 1.0);
  EXPECT_GE(xi_upper(zero, 1, es), 1.0 - 1e-12);
  EXPECT_THROW(xi_upper(zero, 0, es), BadParams);
}

TEST(Xi, SingleEdgeValue) {
  // K2 with alpha on the top eigenspace: diag(1, -1) is fixed by T.
  EigStructure es = eigenspaces(adjacency(Graph::complete(2)));
  const std::vector<double> alpha{1.0, 0.0};
  EXPECT_NEAR(xi_brute_force(es, alpha, 1), 1.0, 1e-12);
  EXPECT_LE(xi_lower(alpha, 1, es, 10, 1), 1.0 + 1e-12);
  EXPECT_GE(xi_upper(alpha, 1, es), 1.0 - 1e-12);
  // Full pinching: the off-diagonal probe is annihilated and e_0 e_0' maps
  // to diag(1/2, -1/2).
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_NEAR(xi_lower(ones, 1, es, 10, 1), 0.5, 1e-12);
  EXPECT_GE(xi_upper(ones, 1, es), xi_brute_force(es, ones, 1) - 1e-12);
}

TEST(Xi, BracketsBruteForce) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Graph& g : {Graph::complete(3), Graph::path(3), Graph::cycle(4), Graph::star(3), Graph::path(4)}) {
    EigStructure es = eigenspaces(adjacency(g));
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<double> alpha(static_cast<std::size_t>(es.m()));
      for (double& a : alpha) a = u(rng);
      if (trial == 0) alpha = one_hot(es.m(), es.ell());
      for (int d = 1; d <= 2; ++d) {
        const double exact = xi_brute_force(es, alpha, d);
        EXPECT_LE(xi_lower(alpha, d, es, 40, 9), exact + 1e-9);
        EXPECT_GE(xi_upper(alpha, d, es), exact - 1e-9);
      }
    }
  }
}

TEST(Xi, CompleteGraphPlugIn) {
  for (int n = 3; n <= 9; ++n) {
    const EigStructure es = eigenspaces(adjacency(Graph::complete(n)));
    const std::vector<double> alpha{0.0, 1.0};
    const double mu0 = 1.0 / std::sqrt(n), mu1 = std::sqrt((n - 1.0) / n);
    const double generic = 2.0 * mu0 * mu1 + mu0 * mu0;
    const double mixed = 2.0 * mu0 + mu0 * mu0;
    EXPECT_LE(xi_upper(alpha, 1, es), std::min(generic, mixed) + 1e-12) << n;
    if (n <= 4) EXPECT_GE(xi_upper(alpha, 1, es), xi_brute_force(es, alpha, 1) - 1e-12);
  }
}

TEST(Xi, MonotoneInDegree) {
  EigStructure es = eigenspaces(adjacency(triangular(7)));
  const auto alpha = one_hot(es.m(), es.ell());
  double prev = 0.0;
  for (int d = 1; d <= 4; ++d) {
    const double up = xi_upper(alpha, d, es);
    EXPECT_GE(up, prev - 1e-12);
    EXPECT_LE(xi_lower(alpha, d, es, 20, 2), up + 1e-9);
    prev = up;
  }
}

TEST(Xi, UpperBoundHoldsOnRandomProbes) {
  EigStructure es = eigenspaces(adjacency(triangular(9)));
  const auto alpha = one_hot(es.m(), es.ell());
  for (int d = 1; d <= 2; ++d) {
    const double up = xi_upper(alpha, d, es);
    for (std::uint64_t s = 0; s < 20; ++s) {
      EditSet e = random_edits(triangular(9), 6 * d, 0.5, s);
      if (e.max_degree() > d) continue;
      EXPECT_LE(max_abs(apply_t(es, alpha, e.matrix())), up + 1e-9);
    }
  }
}

TEST(BuildDelta, DefiningProperties) {
  const Graph g = triangular(7);
  const EigStructure es = eigenspaces(adjacency(g));
  const auto alpha = one_hot(es.m(), es.ell());
  const EditSet e = random_edits(g, 3, 0.5, 4);
  const Matrix m = e.matrix();
  const Matrix delta = build_delta(es, e, alpha, m);
  const Matrix mask = m.cwiseAbs();
  // Delta agrees with M on the edit support.
  EXPECT_LT(max_abs(Matrix((delta - m).cwiseProduct(mask))), 1e-9);
  // Delta lives in the alpha-weighted diagonal blocks.
  for (int i = 0; i < es.m(); ++i)
    for (int j = 0; j < es.m(); ++j) {
      const Matrix block = es.projectors[static_cast<std::size_t>(i)] * delta * es.projectors[static_cast<std::size_t>(j)];
      if (i != j || alpha[static_cast<std::size_t>(i)] == 0.0) EXPECT_LT(max_abs(block), 1e-9);
    }
  const int d = e.max_degree();
  const double xi = xi_upper(alpha, d, es);
  if (xi < 1.0) EXPECT_LE(max_abs(delta), max_abs(m) * (1.0 + xi) / (1.0 - xi) + 1e-9);
}

TEST(BuildDelta, TrivialInputs) {
  const Graph g = triangular(6);
  const EigStructure es = eigenspaces(adjacency(g));
  const auto alpha = one_hot(es.m(), es.ell());
  const EditSet e = random_edits(g, 2, 0.5, 1);
  EXPECT_LT(max_abs(build_delta(es, e, alpha, Matrix::Zero(15, 15))), 1e-15);
  EXPECT_LT(max_abs(build_delta(es, EditSet(15, {}, {}), alpha, e.matrix())), 1e-15);
}

TEST(BuildDelta, DivergentMapThrows) {
  const Graph g = Graph::complete(4);
  const EigStructure es = eigenspaces(adjacency(g));
  const EditSet e(4, {}, {{0, 1}, {2, 3}});
  EXPECT_THROW(build_delta(es, e, {-3.0, -3.0}, e.matrix()), NotContracting);
  EXPECT_THROW(build_delta(es, e, {1.0}, e.matrix()), DimensionMismatch);
}

TEST(NormalCone, Examples) {
  const Matrix a = adjacency(triangular(5));
  const EigStructure es = eigenspaces(a);
  EXPECT_TRUE(check_normal_cone(a, a, 1e-8));
  EXPECT_FALSE(check_normal_cone(Matrix::Identity(10, 10), a, 1e-8));
  std::vector<double> decreasing(static_cast<std::size_t>(es.m()));
  for (int i = 0; i < es.m(); ++i) decreasing[static_cast<std::size_t>(i)] = -i;
  EXPECT_TRUE(check_normal_cone(weighted_projector_sum(decreasing, es), a, 1e-8));
  Matrix q = a;
  q(0, 1) += 0.3;
  q(1, 0) += 0.3;
  EXPECT_FALSE(check_normal_cone(q, a, 1e-8));
}

TEST(Theorem, ZeroAlphaFailsFirstCondition) {
  const EigStructure es = eigenspaces(adjacency(triangular(9)));
  CertificateParams p{{0.0, 0.0, 0.0}, {-1.0, 0.0, 1.0}};
  TheoremCheck t = check_theorem(es, 1, p);
  EXPECT_FALSE(t.condition1);
  EXPECT_FALSE(t.holds);
  EXPECT_TRUE(t.condition2);
  EXPECT_GE(t.xi_upper, 1.0 - 1e-12);
}

TEST(Theorem, NonIncreasingGammaFailsSecondCondition) {
  const EigStructure es = eigenspaces(adjacency(triangular(9)));
  CertificateParams p = default_params(es, 0.5, 1e-3);
  std::reverse(p.gamma.begin(), p.gamma.end());
  TheoremCheck t = check_theorem(es, 1, p);
  EXPECT_FALSE(t.condition2);
  EXPECT_FALSE(t.holds);
  EXPECT_LT(t.margin2, 0.0);
}

TEST(Theorem, OneHotAlphaOnStronglyRegularGraphs) {
  // Probes certify xi > 1/2, so 2 xi + rho < 1 is out of reach for one-hot
  // alpha on these graphs.
  for (const Graph& g : {triangular(9), gq24()}) {
    const EigStructure es = eigenspaces(adjacency(g));
    for (double c1 : {0.05, 0.2, 0.5, 1.0}) {
      const CertificateParams p = default_params(es, c1, 1e-3);
      EXPECT_GT(xi_lower(p.alpha, 1, es, 20, 0), 0.5);
      const TheoremCheck t = check_theorem(es, 1, p);
      EXPECT_FALSE(t.condition1);
      EXPECT_NEAR(t.margin1, 1.0 - 2.0 * t.xi_upper - t.rho, 1e-12);
    }
  }
}

TEST(DefaultParams, CompleteGraph) {
  const int n = 6;
  const EigStructure es = eigenspaces(adjacency(Graph::complete(n)));
  const double c1 = 0.3, eps = 0.01;
  const CertificateParams p = default_params(es, c1, eps);
  EXPECT_EQ(p.alpha, (std::vector<double>{0.0, 1.0}));
  EXPECT_NEAR(p.gamma[1], 0.0, 1e-15);
  EXPECT_NEAR(p.gamma[1] - p.gamma[0], c1 * n + eps, 1e-9);
}

TEST(DefaultParams, SpacingOnTriangularGraph) {
  const EigStructure es = eigenspaces(adjacency(triangular(9)));
  const double c1 = 0.5, eps = 1e-3;
  const CertificateParams p = default_params(es, c1, eps);
  const int ell = es.ell();
  EXPECT_EQ(p.gamma[static_cast<std::size_t>(ell)], 0.0);
  std::vector<double> mu = es.mu;
  std::sort(mu.begin(), mu.end(), std::greater<>());
  for (int i = 0; i + 1 < es.m(); ++i) {
    const double asum = p.alpha[static_cast<std::size_t>(i)] + p.alpha[static_cast<std::size_t>(i + 1)];
    EXPECT_NEAR(p.gamma[static_cast<std::size_t>(i + 1)] - p.gamma[static_cast<std::size_t>(i)],
                c1 * asum / (mu[1] * mu[1]) + eps, 1e-9);
  }
  EXPECT_THROW(default_params(eigenspaces(adjacency(Graph::star(3))), 0.5, 1e-3), NotUniform);
  EXPECT_THROW(default_params(eigenspaces(Matrix::Zero(3, 3)), 0.5, 1e-3), BadParams);
}

TEST(CorollaryBound, Examples) {
  const EigStructure t9 = eigenspaces(adjacency(triangular(9)));
  EXPECT_EQ(t9.kappa(), 8);
  for (double c : {0.5, 1.0, 2.0, 3.0}) EXPECT_EQ(corollary_bound(t9, c), static_cast<int>(std::floor(4.5 * c)));
  for (int k = 3; k <= 7; ++k) EXPECT_EQ(corollary_bound(eigenspaces(adjacency(johnson(k, 1))), 1.0), k);
  EXPECT_THROW(corollary_bound(eigenspaces(adjacency(Graph::path(4))), 1.0), NotUniform);
}

TEST(CheckSufficient, TriangularSingleEditPassesAndRecovers) {
  const Graph t9 = triangular(9);
  const EigStructure es = eigenspaces(adjacency(t9));
  const CertificateParams p = default_params(es, 0.5, 1e-3);
  for (std::uint64_t s = 0; s < 6; ++s) {
    const EditSet e = random_edits(t9, 1, 0.5, derive_seed(11, {s}));
    const CertificateReport r = check_sufficient(t9, e, p);
    EXPECT_TRUE(r.passed) << s;
    EXPECT_TRUE(five_conditions(r));
    EXPECT_LE(r.xi_lower, r.xi_upper + 1e-12);
    ASSERT_TRUE(r.Q.has_value());
    const ShAdmmResult rec = sh_admm(t9, apply_edits(t9, e));
    EXPECT_TRUE(success_check(rec.E_hat, e.matrix())) << s;
  }
}

TEST(CheckSufficient, EmptyEditSetPassesVacuously) {
  const Graph t9 = triangular(9);
  const CertificateParams p = default_params(eigenspaces(adjacency(t9)), 0.5, 1e-3);
  const CertificateReport r = check_sufficient(t9, EditSet(36, {}, {}), p);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.margins.at("omega_match_error"), 0.0, 1e-12);
}

TEST(CheckSufficient, ZeroAlpha) {
  const Graph t9 = triangular(9);
  CertificateParams p{{0.0, 0.0, 0.0}, {-1.0, 0.0, 1.0}};
  // The identity map never contracts on the edit support.
  EXPECT_THROW(check_sufficient(t9, random_edits(t9, 1, 0.5, 3), p), NotContracting);
  EXPECT_FALSE(check_sufficient(t9, EditSet(36, {}, {}), p).flags.at("xi"));
  EXPECT_THROW(check_sufficient(t9, EditSet(5, {}, {}), p), DimensionMismatch);
}

// Whenever the sufficient conditions pass, the Schur-Horn relaxation
// recovers the planted edits.
TEST(CheckSufficient, PassingImpliesRecovery) {
  int passing = 0;
  for (const Graph& g : {triangular(9), gq24()}) {
    const EigStructure es = eigenspaces(adjacency(g));
    for (double c1 : {0.1, 0.3, 0.5, 0.8}) {
      const CertificateParams p = default_params(es, c1, 1e-3);
      for (int d = 1; d <= 2; ++d)
        for (std::uint64_t s = 0; s < 4; ++s) {
          const EditSet e = random_edits(g, d == 1 ? 1 : 3, 0.5, derive_seed(s, {static_cast<std::uint64_t>(d), 5}));
          const CertificateReport r = check_sufficient(g, e, p);
          if (!r.passed) continue;
          ++passing;
          const ShAdmmResult rec = sh_admm(g, apply_edits(g, e));
          EXPECT_TRUE(success_check(rec.E_hat, e.matrix())) << g.n() << " c1=" << c1 << " d=" << d << " s=" << s;
        }
    }
  }
  EXPECT_GT(passing, 0);
}
