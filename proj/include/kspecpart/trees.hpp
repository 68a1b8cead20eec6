#pragma once

#include <utility>
#include <vector>

#include "kspecpart/operators.hpp"

namespace ksp {

struct Tree {
  VertexId n_vertices = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;

  // n - 1 edges, acyclic, covering every vertex.
  bool is_spanning() const;
  bool operator==(const Tree&) const = default;
};

// Vertices sorted by value (ties by index) and chained in that order.
Tree path_graph(const Vector& values);

// Topology of g (self loops dropped, parallel edges merged) with each edge
// weighted by the Euclidean distance between the rows of y.
SparseGraph embedding_weighted_graph(const SparseGraph& g, const Matrix& y);

// Minimum spanning tree; ties broken by (weight, min endpoint, max endpoint).
// Throws std::invalid_argument if g is disconnected.
Tree mst_kruskal(const SparseGraph& g);

// AKPW-style low-stretch spanning tree. Edge lengths are bucketed into
// classes of factor 2; in round j the edges of classes <= j are active and
// clusters are grown by BFS over the contracted graph, seeded in the order
// given by `vertex_order` (a permutation of the vertices). Each ball stops
// growing once its boundary is at most its interior / ln n. Balls are
// contracted and the next round begins until one cluster remains.
Tree lsst_akpw(const SparseGraph& g, const std::vector<VertexId>& vertex_order);

// Indices 0..n-1 sorted by value, ties by index.
std::vector<VertexId> argsort(const Vector& values);

// m path graphs (one per column of x), then for every nonempty column subset
// in binary order an LSST and an MST of the sparsifier reweighted by that
// subset: 2(2^m - 1) + m trees in total.
std::vector<Tree> tree_family(const SparseGraph& sparsifier, const Matrix& x, int threads = 1);

}  // namespace ksp
