#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library code paths being checked (except plain data accessors).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kspecpart/hypergraph.hpp"

namespace ksp::testing {

// Straight from the definition: an edge is cut when two of its pins differ.
inline Weight oracle_cutsize(const Hypergraph& h, const std::vector<BlockId>& labels) {
  Weight cut = 0;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    auto pins = h.pins(e);
    bool split = false;
    for (VertexId a : pins)
      for (VertexId b : pins) split |= labels[a] != labels[b];
    if (split) cut += h.edge_weight(e);
  }
  return cut;
}

// Dense Laplacian of an explicit weighted edge list.
inline Eigen::MatrixXd dense_laplacian(
    VertexId n, const std::vector<std::tuple<VertexId, VertexId, double>>& edges) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v, w] : edges) {
    l(u, u) += w;
    l(v, v) += w;
    l(u, v) -= w;
    l(v, u) -= w;
  }
  return l;
}

// Explicit clique expansion: every pin pair of e gets weight w_e / (|e| - 1).
inline std::vector<std::tuple<VertexId, VertexId, double>> clique_expansion(const Hypergraph& h) {
  std::vector<std::tuple<VertexId, VertexId, double>> out;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    auto pins = h.pins(e);
    const double w = static_cast<double>(h.edge_weight(e)) / (pins.size() - 1.0);
    for (std::size_t i = 0; i < pins.size(); ++i)
      for (std::size_t j = i + 1; j < pins.size(); ++j) out.emplace_back(pins[i], pins[j], w);
  }
  return out;
}

inline Eigen::MatrixXd dense_clique_laplacian(const Hypergraph& h) {
  return dense_laplacian(h.num_vertices(), clique_expansion(h));
}

// Complete graph with edge weights w_u * w_v.
inline Eigen::MatrixXd dense_weight_balance_laplacian(const std::vector<Weight>& w) {
  const auto n = static_cast<VertexId>(w.size());
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      edges.emplace_back(u, v, static_cast<double>(w[u]) * static_cast<double>(w[v]));
  return dense_laplacian(n, edges);
}

// Complete bipartite graph between the two label classes.
inline Eigen::MatrixXd dense_hint_laplacian(const std::vector<BlockId>& labels) {
  const auto n = static_cast<VertexId>(labels.size());
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (labels[u] != labels[v]) edges.emplace_back(u, v, 1.0);
  return dense_laplacian(n, edges);
}

// Smallest nontrivial generalized eigenvalues of (A, B) where both annihilate
// constants: restrict to the complement with an explicit basis built by
// Gram-Schmidt on e_1 - e_i, then solve the dense symmetric-definite pencil.
inline Eigen::VectorXd dense_generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto n = a.rows();
  Eigen::MatrixXd z(n, n - 1);
  for (Eigen::Index i = 1; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[0] = 1.0;
    v[i] = -1.0;
    for (Eigen::Index j = 0; j < i - 1; ++j) v -= z.col(j).dot(v) * z.col(j);
    z.col(i - 1) = v.normalized();
  }
  Eigen::MatrixXd ga = z.transpose() * a * z;
  Eigen::MatrixXd gb = z.transpose() * b * z;
  // Cholesky reduction by hand: C = L^{-1} A L^{-T}.
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (gb + gb.transpose()));
  Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
  Eigen::MatrixXd c = linv * (0.5 * (ga + ga.transpose())) * linv.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Same reduction, returning the eigenvectors lifted back to R^n and
// normalized to x^T B x = 1 (columns in ascending eigenvalue order).
inline Eigen::MatrixXd dense_generalized_eigenvectors(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto n = a.rows();
  Eigen::MatrixXd z(n, n - 1);
  for (Eigen::Index i = 1; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[0] = 1.0;
    v[i] = -1.0;
    for (Eigen::Index j = 0; j < i - 1; ++j) v -= z.col(j).dot(v) * z.col(j);
    z.col(i - 1) = v.normalized();
  }
  Eigen::MatrixXd ga = z.transpose() * a * z;
  Eigen::MatrixXd gb = z.transpose() * b * z;
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (gb + gb.transpose()));
  Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
  Eigen::MatrixXd c = linv * (0.5 * (ga + ga.transpose())) * linv.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()));
  return z * (linv.transpose() * es.eigenvectors());
}

// Textbook LDA: eigenvectors of S_W^{-1} S_B by a general (nonsymmetric)
// eigensolver, largest m real parts.
inline Eigen::MatrixXd oracle_lda(const Eigen::MatrixXd& x, const std::vector<BlockId>& labels, int m) {
  const auto n = x.rows(), d = x.cols();
  const BlockId k = *std::max_element(labels.begin(), labels.end()) + 1;
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, d);
  std::vector<double> counts(k, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    means.row(labels[i]) += x.row(i);
    counts[labels[i]] += 1.0;
  }
  for (BlockId c = 0; c < k; ++c) means.row(c) /= counts[c];
  const Eigen::RowVectorXd mu = x.colwise().mean();
  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d), sb = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd dev = x.row(i) - means.row(labels[i]);
    sw += dev.transpose() * dev;
  }
  for (BlockId c = 0; c < k; ++c) {
    const Eigen::RowVectorXd dev = means.row(c) - mu;
    sb += counts[c] * dev.transpose() * dev;
  }
  sw += 1e-6 * sw.trace() / static_cast<double>(d) * Eigen::MatrixXd::Identity(d, d);
  Eigen::EigenSolver<Eigen::MatrixXd> es(sw.inverse() * sb);
  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](auto i, auto j) { return es.eigenvalues()[i].real() > es.eigenvalues()[j].real(); });
  Eigen::MatrixXd p(d, m);
  for (int j = 0; j < m; ++j) p.col(j) = es.eigenvectors().col(order[j]).real();
  return x * p;
}

// Tree edge list -> adjacency lists.
inline std::vector<std::vector<VertexId>> adjacency(VertexId n,
                                                    const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

// Side of the tree reachable from `start` once edge `skip` is deleted.
inline std::vector<BlockId> split_by_tree_edge(VertexId n,
                                               const std::vector<std::pair<VertexId, VertexId>>& edges,
                                               std::size_t skip) {
  std::vector<std::vector<std::pair<VertexId, std::size_t>>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].emplace_back(edges[i].second, i);
    adj[edges[i].second].emplace_back(edges[i].first, i);
  }
  std::vector<BlockId> side(n, 1);
  std::vector<VertexId> stack{edges[skip].first};
  side[edges[skip].first] = 0;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (auto [u, idx] : adj[v]) {
      if (idx == skip || side[u] == 0) continue;
      side[u] = 0;
      stack.push_back(u);
    }
  }
  return side;
}

inline bool is_spanning_tree(VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
  if (static_cast<VertexId>(edges.size()) != n - 1) return false;
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (auto [u, v] : edges) {
    const VertexId a = find(u), b = find(v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

// Balance straight from the definition with a small floating tolerance:
// every block weight within [(1/k - eps) W, (1/k + eps) W].
inline bool oracle_balanced(const Hypergraph& h, const std::vector<BlockId>& labels, BlockId k, double eps) {
  std::vector<long double> w(k, 0.0L);
  long double total = 0.0L;
  for (VertexId v = 0; v < h.num_vertices(); ++v) {
    w[labels[v]] += h.vertex_weight(v);
    total += h.vertex_weight(v);
  }
  const long double lo = (1.0L / k - eps) * total - 1e-9L, hi = (1.0L / k + eps) * total + 1e-9L;
  return std::all_of(w.begin(), w.end(), [&](long double x) { return lo <= x && x <= hi; });
}

// Minimum balanced cutsize by enumerating restricted growth strings (each
// label at most one above the running maximum), so block relabelings are
// visited once. -1 when nothing is balanced.
inline Weight oracle_optimal_cut(const Hypergraph& h, BlockId k, double eps) {
  const VertexId n = h.num_vertices();
  std::vector<BlockId> labels(n, 0);
  Weight best = -1;
  std::function<void(VertexId, BlockId)> rec = [&](VertexId v, BlockId used) {
    if (v == n) {
      if (!oracle_balanced(h, labels, k, eps)) return;
      const Weight cut = oracle_cutsize(h, labels);
      if (best < 0 || cut < best) best = cut;
      return;
    }
    for (BlockId b = 0; b <= std::min<BlockId>(used, k - 1); ++b) {
      labels[v] = b;
      rec(v + 1, std::max<BlockId>(used, b + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace ksp::testing
