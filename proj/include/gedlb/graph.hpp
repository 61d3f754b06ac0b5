#pragma once

// Simple loopless graphs, vertex-indexed adjacency matrices, edge edits and
// the exact (brute-force) graph edit distance used as a validation oracle.

#include <gedlb/errors.hpp>
#include <gedlb/linalg.hpp>
#include <gedlb/random.hpp>

#include <algorithm>
#include <compare>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace gedlb {

// Unordered vertex pair, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

  auto operator<=>(const Edge&) const = default;
};

class Graph {
 public:
  Graph() = default;

  // Throws BadParams on self-loops, duplicate edges or out-of-range endpoints.
  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw BadParams("negative vertex count");
    for (const Edge& e : edges_) {
      if (e.u == e.v) throw BadParams("self-loop at vertex " + std::to_string(e.u));
      if (e.u < 0 || e.v >= n_)
        throw BadParams("edge endpoint out of range: (" + std::to_string(e.u) +
                        "," + std::to_string(e.v) + ")");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw BadParams("duplicate edge");
  }

  static Graph empty(int n) { return Graph(n, {}); }

  static Graph complete(int n) {
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
    return Graph(n, std::move(es));
  }

  static Graph path(int n) {
    std::vector<Edge> es;
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return Graph(n, std::move(es));
  }

  static Graph cycle(int n) {
    if (n < 3) throw BadParams("cycle needs at least 3 vertices");
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(es));
  }

  // Star K_{1,leaves}; vertex 0 is the center.
  static Graph star(int leaves) {
    std::vector<Edge> es;
    for (int i = 1; i <= leaves; ++i) es.emplace_back(0, i);
    return Graph(leaves + 1, std::move(es));
  }

  static Graph from_adjacency(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("adjacency must be square");
    std::vector<Edge> es;
    const int n = static_cast<int>(a.rows());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (a(i, j) > 0.5) es.emplace_back(i, j);
    return Graph(n, std::move(es));
  }

  int n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  bool has_edge(int a, int b) const {
    if (a == b) return false;
    return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const Edge& e : edges_) {
      ++deg[static_cast<std::size_t>(e.u)];
      ++deg[static_cast<std::size_t>(e.v)];
    }
    return deg;
  }

  std::vector<Edge> non_edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (!has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }

  // Image of the graph under the relabeling i -> perm[i].
  Graph relabel(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != n_) throw DimensionMismatch("permutation size");
    std::vector<Edge> es;
    es.reserve(edges_.size());
    for (const Edge& e : edges_)
      es.emplace_back(perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]);
    return Graph(n_, std::move(es));
  }

  bool operator==(const Graph&) const = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

inline Matrix adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

inline bool is_connected(const Graph& g) {
  if (g.n() <= 1) return true;
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(g.n()));
  for (const Edge& e : g.edges()) {
    nbr[static_cast<std::size_t>(e.u)].push_back(e.v);
    nbr[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : nbr[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.n();
}

// Adjacency matrix whose diagonal marks vertex presence. Off-diagonal ones
// imply both endpoints are present.
class VertexIndexedAdjacency {
 public:
  explicit VertexIndexedAdjacency(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) throw DimensionMismatch("vertex-indexed matrix must be square");
    const int n = dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double x = m_(i, j);
        if ((x != 0.0 && x != 1.0) || x != m_(j, i))
          throw BadParams("vertex-indexed matrix must be symmetric 0/1");
        if (i != j && x == 1.0 && (m_(i, i) != 1.0 || m_(j, j) != 1.0))
          throw BadParams("edge incident to an absent vertex");
      }
  }

  // g occupies the first g.n() indices of an n-dimensional matrix; the
  // remaining indices are absent vertices.
  static VertexIndexedAdjacency from_graph(const Graph& g, int n) {
    if (n < g.n()) throw DimensionMismatch("padding dimension smaller than graph");
    Matrix m = Matrix::Zero(n, n);
    m.topLeftCorner(g.n(), g.n()) = adjacency(g);
    for (int i = 0; i < g.n(); ++i) m(i, i) = 1.0;
    return VertexIndexedAdjacency(std::move(m));
  }

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

// A set of edge insertions and deletions on an n-vertex graph.
class EditSet {
 public:
  EditSet() = default;

  EditSet(int n, std::vector<Edge> adds, std::vector<Edge> deletes)
      : n_(n), adds_(std::move(adds)), deletes_(std::move(deletes)) {
    for (auto* list : {&adds_, &deletes_}) {
      for (const Edge& e : *list)
        if (e.u == e.v || e.u < 0 || e.v >= n_) throw BadParams("edit pair out of range");
      std::sort(list->begin(), list->end());
      if (std::adjacent_find(list->begin(), list->end()) != list->end())
        throw BadParams("duplicate edit pair");
    }
    std::vector<Edge> both;
    std::set_intersection(adds_.begin(), adds_.end(), deletes_.begin(), deletes_.end(),
                          std::back_inserter(both));
    if (!both.empty()) throw BadParams("pair is both added and deleted");
  }

  int n() const noexcept { return n_; }
  const std::vector<Edge>& adds() const noexcept { return adds_; }
  const std::vector<Edge>& deletes() const noexcept { return deletes_; }
  int size() const noexcept { return static_cast<int>(adds_.size() + deletes_.size()); }
  bool empty() const noexcept { return size() == 0; }

  // E*: +1 on added pairs, -1 on deleted pairs.
  Matrix matrix() const {
    Matrix e = Matrix::Zero(n_, n_);
    for (const Edge& p : adds_) e(p.u, p.v) = e(p.v, p.u) = 1.0;
    for (const Edge& p : deletes_) e(p.u, p.v) = e(p.v, p.u) = -1.0;
    return e;
  }

  // Maximum number of edited pairs incident to a single vertex.
  int max_degree() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (auto* list : {&adds_, &deletes_})
      for (const Edge& p : *list) {
        ++deg[static_cast<std::size_t>(p.u)];
        ++deg[static_cast<std::size_t>(p.v)];
      }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }

  EditSet inverse() const { return EditSet(n_, deletes_, adds_); }

  bool operator==(const EditSet&) const = default;

 private:
  int n_ = 0;
  std::vector<Edge> adds_;
  std::vector<Edge> deletes_;
};

inline Graph apply_edits(const Graph& g, const EditSet& e) {
  if (e.n() != g.n()) throw DimensionMismatch("edit set dimension differs from graph");
  for (const Edge& p : e.adds())
    if (g.has_edge(p.u, p.v))
      throw InconsistentEdit("add targets existing edge (" + std::to_string(p.u) + "," +
                             std::to_string(p.v) + ")");
  for (const Edge& p : e.deletes())
    if (!g.has_edge(p.u, p.v))
      throw InconsistentEdit("delete targets non-edge (" + std::to_string(p.u) + "," +
                             std::to_string(p.v) + ")");
  std::vector<Edge> out;
  std::set_difference(g.edges().begin(), g.edges().end(), e.deletes().begin(),
                      e.deletes().end(), std::back_inserter(out));
  out.insert(out.end(), e.adds().begin(), e.adds().end());
  return Graph(g.n(), std::move(out));
}

// Number of additions in a random edit of `count` pairs. Exact halves round
// toward deletions.
inline int addition_count(int count, double add_fraction) {
  return static_cast<int>(std::floor(count * add_fraction + 0.5 - 1e-9));
}

// Samples round(count * add_fraction) additions from the non-edges and the
// rest as deletions from the edges, each uniformly without replacement.
inline EditSet random_edits(const Graph& g, int count, double add_fraction, std::uint64_t seed) {
  if (count < 0 || add_fraction < 0.0 || add_fraction > 1.0)
    throw BadParams("count must be nonnegative and add_fraction in [0,1]");
  const int n_add = addition_count(count, add_fraction);
  const int n_del = count - n_add;
  std::vector<Edge> non_edges = g.non_edges();
  std::vector<Edge> edges = g.edges();
  if (n_add > static_cast<int>(non_edges.size()) || n_del > static_cast<int>(edges.size()))
    throw InfeasibleMix("requested " + std::to_string(n_add) + " additions and " +
                        std::to_string(n_del) + " deletions; graph has " +
                        std::to_string(non_edges.size()) + " non-edges and " +
                        std::to_string(edges.size()) + " edges");
  Rng rng(seed);
  auto sample = [&rng](std::vector<Edge>& pool, int k) {
    // Partial Fisher-Yates.
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
    }
    return std::vector<Edge>(pool.begin(), pool.begin() + k);
  };
  std::vector<Edge> adds = sample(non_edges, n_add);
  std::vector<Edge> dels = sample(edges, n_del);
  return EditSet(g.n(), std::move(adds), std::move(dels));
}

namespace detail {

// Minimizes the number of mismatching upper-triangle entries (diagonal
// included when `with_diagonal`) between a and pi(b) over permutations pi,
// by depth-first branch and bound on the partial mismatch count.
class PermutationSearch {
 public:
  PermutationSearch(const Matrix& a, const Matrix& b, bool with_diagonal)
      : n_(static_cast<int>(a.rows())), with_diagonal_(with_diagonal),
        a_(static_cast<std::size_t>(n_ * n_)), b_(static_cast<std::size_t>(n_ * n_)) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        a_[idx(i, j)] = a(i, j) > 0.5;
        b_[idx(i, j)] = b(i, j) > 0.5;
      }
  }

  int run() {
    map_.assign(static_cast<std::size_t>(n_), -1);
    used_.assign(static_cast<std::size_t>(n_), 0);
    best_ = 0;
    // Identity assignment seeds the incumbent.
    for (int i = 0; i < n_; ++i)
      for (int j = with_diagonal_ ? i : i + 1; j < n_; ++j)
        best_ += a_[idx(i, j)] != b_[idx(i, j)];
    dfs(0, 0);
    return best_;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }

  void dfs(int k, int cost) {
    if (cost >= best_) return;
    if (k == n_) {
      best_ = cost;
      return;
    }
    for (int t = 0; t < n_; ++t) {
      if (used_[static_cast<std::size_t>(t)]) continue;
      int add = 0;
      if (with_diagonal_) add += a_[idx(k, k)] != b_[idx(t, t)];
      for (int j = 0; j < k; ++j) add += a_[idx(k, j)] != b_[idx(t, map_[static_cast<std::size_t>(j)])];
      if (cost + add >= best_) continue;
      used_[static_cast<std::size_t>(t)] = 1;
      map_[static_cast<std::size_t>(k)] = t;
      dfs(k + 1, cost + add);
      used_[static_cast<std::size_t>(t)] = 0;
    }
  }

  int n_;
  bool with_diagonal_;
  std::vector<char> a_, b_;
  std::vector<int> map_;
  std::vector<char> used_;
  int best_ = 0;
};

}  // namespace detail

inline constexpr int kExactGedBudget = 9;
inline constexpr int kExactGedExtBudget = 8;

// Exact edit distance under edge insertions/deletions between two graphs on
// the same vertex count.
inline int exact_ged(const Graph& g1, const Graph& g2, int budget = kExactGedBudget) {
  if (g1.n() != g2.n()) throw DimensionMismatch("exact_ged needs equal vertex counts");
  if (g1.n() > budget)
    throw TooLarge("exact_ged: n = " + std::to_string(g1.n()) + " exceeds budget " +
                   std::to_string(budget));
  return detail::PermutationSearch(adjacency(g1), adjacency(g2), false).run();
}

// Exact edit distance with vertex insertions/deletions allowed; each vertex
// or edge edit costs one.
inline int exact_ged_ext(const Graph& g1, const Graph& g2, int budget = kExactGedExtBudget) {
  const int n = std::max(g1.n(), g2.n());
  if (n > budget)
    throw TooLarge("exact_ged_ext: n = " + std::to_string(n) + " exceeds budget " +
                   std::to_string(budget));
  auto a = VertexIndexedAdjacency::from_graph(g1, n);
  auto b = VertexIndexedAdjacency::from_graph(g2, n);
  return detail::PermutationSearch(a.matrix(), b.matrix(), true).run();
}

}  // namespace gedlb
