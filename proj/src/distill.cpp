#include "kspecpart/distill.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ksp {

RootedTree::RootedTree(const Tree& t, VertexId root) : root_(root) {
  if (!t.is_spanning()) throw std::invalid_argument("tree does not span its vertex set");
  const VertexId n = t.n_vertices;
  if (root < 0 || root >= n) throw std::invalid_argument("tree root out of range");

  std::vector<int> offset(n + 1, 0);
  for (auto [u, v] : t.edges) {
    ++offset[u + 1];
    ++offset[v + 1];
  }
  for (VertexId v = 0; v < n; ++v) offset[v + 1] += offset[v];
  std::vector<std::pair<VertexId, int>> adj(offset[n]);
  {
    std::vector<int> fill(offset.begin(), offset.end() - 1);
    for (int i = 0; i < static_cast<int>(t.edges.size()); ++i) {
      auto [u, v] = t.edges[i];
      adj[fill[u]++] = {v, i};
      adj[fill[v]++] = {u, i};
    }
  }

  parent_.assign(n, -1);
  parent_edge_.assign(n, -1);
  depth_.assign(n, 0);
  post_index_.assign(n, -1);
  subtree_size_.assign(n, 1);
  post_order_.reserve(n);
  euler_.reserve(2 * static_cast<std::size_t>(n) - 1);

  // Iterative DFS; next[v] is the position of the next neighbour to visit.
  std::vector<int> next(offset.begin(), offset.end() - 1);
  std::vector<VertexId> stack{root};
  euler_.push_back(root);
  while (!stack.empty()) {
    const VertexId v = stack.back();
    if (next[v] < offset[v + 1]) {
      auto [u, idx] = adj[next[v]++];
      if (u == parent_[v] && idx == parent_edge_[v]) continue;
      parent_[u] = v;
      parent_edge_[u] = idx;
      depth_[u] = depth_[v] + 1;
      stack.push_back(u);
      euler_.push_back(u);
      continue;
    }
    stack.pop_back();
    post_index_[v] = static_cast<VertexId>(post_order_.size());
    post_order_.push_back(v);
    if (!stack.empty()) {
      subtree_size_[stack.back()] += subtree_size_[v];
      euler_.push_back(stack.back());
    }
  }
}

LcaOracle::LcaOracle(const RootedTree& t) : tree_(&t), first_(t.num_vertices(), -1) {
  const auto& tour = t.euler_tour();
  for (int i = 0; i < static_cast<int>(tour.size()); ++i)
    if (first_[tour[i]] < 0) first_[tour[i]] = i;
  table_.push_back(tour);
  for (std::size_t span = 2; span <= tour.size(); span *= 2) {
    const auto& prev = table_.back();
    std::vector<VertexId> level(tour.size() - span + 1);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const VertexId a = prev[i], b = prev[i + span / 2];
      level[i] = t.depth(a) <= t.depth(b) ? a : b;
    }
    table_.push_back(std::move(level));
  }
}

VertexId LcaOracle::lca(VertexId u, VertexId v) const {
  int a = first_[u], b = first_[v];
  if (a > b) std::swap(a, b);
  const int level = std::bit_width(static_cast<unsigned>(b - a + 1)) - 1;
  const VertexId x = table_[level][a], y = table_[level][b - (1 << level) + 1];
  return tree_->depth(x) <= tree_->depth(y) ? x : y;
}

TreeDistiller::TreeDistiller(Tree t, VertexId root)
    : tree_(std::move(t)), rooted_(tree_, root), lca_(rooted_), child_of_edge_(tree_.edges.size()) {
  for (VertexId v = 0; v < rooted_.num_vertices(); ++v)
    if (rooted_.parent_edge(v) >= 0) child_of_edge_[rooted_.parent_edge(v)] = v;
}

std::span<const VertexId> TreeDistiller::below(std::size_t edge) const {
  return rooted_.subtree(child_of_edge_.at(edge));
}

DistilledTree TreeDistiller::distill(const Hypergraph& h) const {
  const auto w = h.vertex_weights();
  return distill(h, std::span<const Weight>(w.data(), w.size()), nullptr);
}

DistilledTree TreeDistiller::distill(const Hypergraph& h, std::span<const Weight> vertex_weights,
                                     const std::vector<bool>* edge_active) const {
  const VertexId n = rooted_.num_vertices();
  if (h.num_vertices() != n) throw std::invalid_argument("distill: tree and hypergraph sizes differ");
  if (static_cast<VertexId>(vertex_weights.size()) != n) throw std::invalid_argument("distill: bad weight vector");

  // +w_e on every pin, -w_e on the LCA of each pair of pins adjacent in
  // post-order and once more on the LCA of all pins. A subtree is a
  // contiguous post-order interval, so its label sum is w_e exactly when it
  // holds some but not all pins of e.
  std::vector<Weight> delta(n, 0);
  std::vector<VertexId> pins;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    if (edge_active && !(*edge_active)[e]) continue;
    const Weight w = h.edge_weight(e);
    const auto span = h.pins(e);
    pins.assign(span.begin(), span.end());
    std::sort(pins.begin(), pins.end(),
              [&](VertexId a, VertexId b) { return rooted_.post_index(a) < rooted_.post_index(b); });
    for (std::size_t i = 0; i < pins.size(); ++i) {
      delta[pins[i]] += w;
      if (i > 0) delta[lca_.lca(pins[i - 1], pins[i])] -= w;
    }
    delta[lca_.lca(pins.front(), pins.back())] -= w;
  }

  std::vector<Weight> cut_below(n, 0), weight_below(n, 0);
  for (VertexId v : rooted_.post_order()) {
    cut_below[v] += delta[v];
    weight_below[v] += vertex_weights[v];
    if (const VertexId p = rooted_.parent(v); p >= 0) {
      cut_below[p] += cut_below[v];
      weight_below[p] += weight_below[v];
    }
  }

  DistilledTree out{tree_, std::vector<Weight>(tree_.edges.size()), std::vector<Weight>(tree_.edges.size()),
                    child_of_edge_};
  for (std::size_t i = 0; i < tree_.edges.size(); ++i) {
    out.edge_cut_weight[i] = cut_below[child_of_edge_[i]];
    out.subtree_vertex_weight[i] = weight_below[child_of_edge_[i]];
  }
  return out;
}

}  // namespace ksp
