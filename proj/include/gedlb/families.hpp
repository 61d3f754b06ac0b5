#pragma once

// Named graph families: Johnson, Kneser, Hamming, triangular, GQ(2,4),
// windmills and the extremal graphs E(n), plus structural validators.

#include <gedlb/detail/gq24_table.hpp>
#include <gedlb/errors.hpp>
#include <gedlb/graph.hpp>
#include <gedlb/spectra.hpp>

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gedlb {

namespace detail {

// All l-subsets of {0..k-1} as bitmasks, in lexicographic order.
inline std::vector<std::uint32_t> subsets(int k, int l) {
  std::vector<std::uint32_t> out;
  std::vector<int> idx(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= 1u << i;
    out.push_back(mask);
    int p = l - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == k - l + p) --p;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < l; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

template <class Pred>
Graph subset_graph(int k, int l, Pred adjacent) {
  std::vector<std::uint32_t> sets = subsets(k, l);
  std::vector<Edge> es;
  const int n = static_cast<int>(sets.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacent(std::popcount(sets[static_cast<std::size_t>(i)] & sets[static_cast<std::size_t>(j)])))
        es.emplace_back(i, j);
  return Graph(n, std::move(es));
}

}  // namespace detail

inline Graph johnson(int k, int l) {
  if (l <= 0 || l >= k || k > 30) throw BadParams("johnson needs 0 < l < k <= 30");
  return detail::subset_graph(k, l, [l](int common) { return common == l - 1; });
}

inline Graph kneser(int k, int l) {
  if (l <= 0 || k < 2 * l || k > 30) throw BadParams("kneser needs 0 < l and 2l <= k <= 30");
  return detail::subset_graph(k, l, [](int common) { return common == 0; });
}

inline Graph hamming(int l, int q) {
  if (l < 1 || q < 2) throw BadParams("hamming needs l >= 1 and q >= 2");
  long long n = 1;
  for (int i = 0; i < l; ++i) {
    n *= q;
    if (n > 100000) throw BadParams("hamming graph too large");
  }
  std::vector<Edge> es;
  for (long long a = 0; a < n; ++a) {
    long long stride = 1;
    for (int c = 0; c < l; ++c, stride *= q) {
      const long long digit = (a / stride) % q;
      for (long long other = digit + 1; other < q; ++other)
        es.emplace_back(static_cast<int>(a), static_cast<int>(a + (other - digit) * stride));
    }
  }
  return Graph(static_cast<int>(n), std::move(es));
}

inline Graph triangular(int k) {
  if (k < 4) throw BadParams("triangular needs k >= 4");
  return johnson(k, 2);
}

struct SrgParams {
  int n = 0;
  int r = 0;
  int d_a = 0;   // common neighbors of adjacent pairs
  int d_na = 0;  // common neighbors of non-adjacent pairs

  bool operator==(const SrgParams&) const = default;
};

// Parameters when g is strongly regular. A constant with no pairs to
// constrain it (complete or edgeless graphs) is reported as 0.
inline std::optional<SrgParams> check_srg(const Graph& g) {
  const int n = g.n();
  if (n == 0) return std::nullopt;
  std::vector<int> deg = g.degrees();
  for (int d : deg)
    if (d != deg[0]) return std::nullopt;
  Matrix a = adjacency(g);
  Matrix common = a * a;
  std::optional<int> da, dna;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int c = static_cast<int>(std::lround(common(i, j)));
      std::optional<int>& slot = a(i, j) > 0.5 ? da : dna;
      if (!slot) slot = c;
      else if (*slot != c) return std::nullopt;
    }
  return SrgParams{n, deg[0], da.value_or(0), dna.value_or(0)};
}

inline Graph gq24() {
  std::vector<Edge> es;
  es.reserve(detail::kGq24Edges.size());
  for (auto [u, v] : detail::kGq24Edges) es.emplace_back(u, v);
  Graph g(27, std::move(es));
  auto p = check_srg(g);
  if (!p || !(*p == SrgParams{27, 10, 1, 5}))
    throw ConstructionInvalid("embedded GQ(2,4) table is not srg(27,10,1,5)");
  return g;
}

// m copies of K_n sharing vertex 0.
inline Graph windmill(int m, int n) {
  if (m < 1 || n < 2) throw BadParams("windmill needs m >= 1 and n >= 2");
  std::vector<Edge> es;
  for (int c = 0; c < m; ++c) {
    std::vector<int> verts{0};
    for (int t = 1; t < n; ++t) verts.push_back(1 + c * (n - 1) + (t - 1));
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j) es.emplace_back(verts[i], verts[j]);
  }
  return Graph(m * (n - 1) + 1, std::move(es));
}

// Disjoint cliques (K4s first, then K3s) covering n vertices, with the
// lowest vertex of every clique joined to the lowest vertex of the first.
inline Graph extremal_e(int n) {
  if (n < 6) throw BadParams("extremal_e needs n >= 6");
  const int s = n / 3, r = n % 3;
  std::vector<int> sizes;
  if (r == 0) sizes.assign(static_cast<std::size_t>(s), 3);
  else {
    sizes.assign(static_cast<std::size_t>(r), 4);
    sizes.insert(sizes.end(), static_cast<std::size_t>(s - r), 3);
  }
  std::vector<Edge> es;
  int base = 0;
  for (int sz : sizes) {
    for (int i = 0; i < sz; ++i)
      for (int j = i + 1; j < sz; ++j) es.emplace_back(base + i, base + j);
    if (base != 0) es.emplace_back(0, base);
    base += sz;
  }
  return Graph(base, std::move(es));
}

inline bool check_projector_diagonal_uniformity(const EigStructure& es, double tol) {
  for (const Matrix& p : es.projectors) {
    Vector d = p.diagonal();
    if (d.size() > 0 && d.maxCoeff() - d.minCoeff() > tol) return false;
  }
  return true;
}

}  // namespace gedlb
