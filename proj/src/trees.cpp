#include "kspecpart/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "kspecpart/parallel.hpp"

namespace ksp {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(VertexId n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  VertexId find(VertexId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<VertexId> parent_;
  std::vector<int> rank_;
};

void require_connected(const SparseGraph& g, const char* who) {
  DisjointSets sets(g.n_vertices);
  VertexId components = g.n_vertices;
  for (const auto& e : g.edges) components -= sets.unite(e.u, e.v);
  if (components > 1) throw std::invalid_argument(std::string(who) + ": graph is disconnected");
}

}  // namespace

bool Tree::is_spanning() const {
  if (n_vertices < 1 || static_cast<VertexId>(edges.size()) != n_vertices - 1) return false;
  DisjointSets sets(n_vertices);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices || !sets.unite(u, v)) return false;
  }
  return true;
}

std::vector<VertexId> argsort(const Vector& values) {
  std::vector<VertexId> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return values[a] < values[b]; });
  return order;
}

Tree path_graph(const Vector& values) {
  const auto order = argsort(values);
  Tree t{static_cast<VertexId>(values.size()), {}};
  for (std::size_t i = 1; i < order.size(); ++i) t.edges.emplace_back(order[i - 1], order[i]);
  return t;
}

SparseGraph embedding_weighted_graph(const SparseGraph& g, const Matrix& y) {
  if (y.rows() != g.n_vertices) throw std::invalid_argument("embedding_weighted_graph: row count mismatch");
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(g.edges.size());
  for (const auto& e : g.edges)
    if (e.u != e.v) pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  SparseGraph out;
  out.n_vertices = g.n_vertices;
  out.edges.reserve(pairs.size());
  for (auto [u, v] : pairs) out.edges.push_back({u, v, (y.row(u) - y.row(v)).norm()});
  return out;
}

Tree mst_kruskal(const SparseGraph& g) {
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    const auto& e = g.edges[i];
    return std::tuple(e.w, std::min(e.u, e.v), std::max(e.u, e.v));
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  DisjointSets sets(g.n_vertices);
  Tree t{g.n_vertices, {}};
  for (std::size_t i : order) {
    const auto& e = g.edges[i];
    if (sets.unite(e.u, e.v)) t.edges.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  if (static_cast<VertexId>(t.edges.size()) != g.n_vertices - 1)
    throw std::invalid_argument("mst_kruskal: graph is disconnected");
  return t;
}

Tree lsst_akpw(const SparseGraph& g, const std::vector<VertexId>& vertex_order) {
  const VertexId n = g.n_vertices;
  if (static_cast<VertexId>(vertex_order.size()) != n) throw std::invalid_argument("lsst_akpw: bad vertex order");
  std::vector<VertexId> rank(n, -1);
  for (VertexId i = 0; i < n; ++i) {
    const VertexId v = vertex_order[i];
    if (v < 0 || v >= n || rank[v] >= 0) throw std::invalid_argument("lsst_akpw: vertex order is not a permutation");
    rank[v] = i;
  }
  require_connected(g, "lsst_akpw");
  Tree t{n, {}};
  if (n <= 1) return t;

  double min_len = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges)
    if (e.w > 0.0) min_len = std::min(min_len, e.w);
  std::vector<int> edge_class(g.edges.size(), 0);
  int max_class = 0;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const double w = g.edges[i].w;
    if (w > 0.0) edge_class[i] = std::max(0, static_cast<int>(std::floor(std::log2(w / min_len))));
    max_class = std::max(max_class, edge_class[i]);
  }
  const double log_n = std::max(1.0, std::log(static_cast<double>(n)));

  std::vector<VertexId> cluster(n);
  std::iota(cluster.begin(), cluster.end(), 0);
  VertexId n_clusters = n;

  for (int round = 0; n_clusters > 1; ++round) {
    // Cluster graph over active edges; keep the lightest original edge per
    // cluster pair and the multiplicity for the ball-growing test.
    struct Link {
      std::size_t edge;
      int count;
    };
    std::map<std::pair<VertexId, VertexId>, Link> links;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (edge_class[i] > round) continue;
      VertexId a = cluster[g.edges[i].u], b = cluster[g.edges[i].v];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      auto [it, inserted] = links.try_emplace({a, b}, Link{i, 0});
      ++it->second.count;
      const auto& cur = g.edges[it->second.edge];
      if (g.edges[i].w < cur.w) it->second.edge = i;
    }
    if (links.empty()) {
      if (round > max_class) throw std::logic_error("lsst_akpw: no progress on a connected graph");
      continue;
    }

    std::vector<VertexId> cluster_rank(n_clusters, n);
    for (VertexId v = 0; v < n; ++v) cluster_rank[cluster[v]] = std::min(cluster_rank[cluster[v]], rank[v]);
    struct Arc {
      VertexId to;
      std::size_t edge;
      int count;
    };
    std::vector<std::vector<Arc>> adj(n_clusters);
    for (const auto& [key, link] : links) {
      adj[key.first].push_back({key.second, link.edge, link.count});
      adj[key.second].push_back({key.first, link.edge, link.count});
    }
    for (auto& list : adj)
      std::sort(list.begin(), list.end(),
                [&](const Arc& a, const Arc& b) { return cluster_rank[a.to] < cluster_rank[b.to]; });
    std::vector<VertexId> seeds(n_clusters);
    std::iota(seeds.begin(), seeds.end(), 0);
    std::sort(seeds.begin(), seeds.end(), [&](VertexId a, VertexId b) { return cluster_rank[a] < cluster_rank[b]; });

    std::vector<VertexId> ball(n_clusters, -1);
    VertexId n_balls = 0;
    for (VertexId seed : seeds) {
      if (ball[seed] >= 0) continue;
      const VertexId id = n_balls++;
      ball[seed] = id;
      std::vector<VertexId> frontier{seed};
      long internal = 0;
      while (!frontier.empty()) {
        // Boundary: arcs from the ball to clusters not yet in any ball.
        long boundary = 0;
        std::vector<VertexId> next;
        for (VertexId c : frontier)
          for (const Arc& a : adj[c])
            if (ball[a.to] < 0) boundary += a.count;
        if (boundary == 0 || static_cast<double>(boundary) <= static_cast<double>(internal) / log_n) break;
        for (VertexId c : frontier)
          for (const Arc& a : adj[c]) {
            if (ball[a.to] >= 0) continue;
            ball[a.to] = id;
            t.edges.emplace_back(std::min(g.edges[a.edge].u, g.edges[a.edge].v),
                                 std::max(g.edges[a.edge].u, g.edges[a.edge].v));
            next.push_back(a.to);
          }
        // Recount interior arcs (each counted once).
        internal = 0;
        for (const auto& [key, link] : links)
          if (ball[key.first] == id && ball[key.second] == id) internal += link.count;
        frontier = std::move(next);
      }
    }
    for (VertexId v = 0; v < n; ++v) cluster[v] = ball[cluster[v]];
    n_clusters = n_balls;
  }
  return t;
}

std::vector<Tree> tree_family(const SparseGraph& sparsifier, const Matrix& x, int threads) {
  const auto m = static_cast<int>(x.cols());
  if (m < 1) throw std::invalid_argument("tree_family: embedding has no columns");
  if (m > 16) throw std::invalid_argument("tree_family: too many columns");
  if (x.rows() != sparsifier.n_vertices) throw std::invalid_argument("tree_family: row count mismatch");
  const std::size_t subsets = (std::size_t{1} << m) - 1;
  std::vector<Tree> family(m + 2 * subsets);
  for (int j = 0; j < m; ++j) family[j] = path_graph(x.col(j));
  const auto order = argsort(x.col(0));
  parallel_for(subsets, threads, [&](std::size_t s) {
    const std::size_t mask = s + 1;
    std::vector<Eigen::Index> cols;
    for (int j = 0; j < m; ++j)
      if (mask >> j & 1) cols.push_back(j);
    const SparseGraph g = embedding_weighted_graph(sparsifier, x(Eigen::all, cols));
    family[m + 2 * s] = lsst_akpw(g, order);
    family[m + 2 * s + 1] = mst_kruskal(g);
  });
  return family;
}

}  // namespace ksp
