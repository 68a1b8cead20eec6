#pragma once

#include <span>
#include <vector>

#include "kspecpart/trees.hpp"

namespace ksp {

// A spanning tree rooted at a fixed vertex, with post-order numbering. The
// subtree of v occupies the post-order interval [subtree_begin(v), post_index(v)].
class RootedTree {
 public:
  explicit RootedTree(const Tree& t, VertexId root = 0);

  VertexId num_vertices() const { return static_cast<VertexId>(parent_.size()); }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  // Index into Tree::edges of the edge to the parent, -1 for the root.
  int parent_edge(VertexId v) const { return parent_edge_[v]; }
  int depth(VertexId v) const { return depth_[v]; }
  const std::vector<VertexId>& post_order() const { return post_order_; }
  VertexId post_index(VertexId v) const { return post_index_[v]; }
  VertexId subtree_begin(VertexId v) const { return post_index_[v] - subtree_size_[v] + 1; }
  VertexId subtree_size(VertexId v) const { return subtree_size_[v]; }
  std::span<const VertexId> subtree(VertexId v) const {
    return {post_order_.data() + subtree_begin(v), static_cast<std::size_t>(subtree_size_[v])};
  }
  const std::vector<VertexId>& euler_tour() const { return euler_; }

 private:
  VertexId root_;
  std::vector<VertexId> parent_;
  std::vector<int> parent_edge_;
  std::vector<int> depth_;
  std::vector<VertexId> post_order_;
  std::vector<VertexId> post_index_;
  std::vector<VertexId> subtree_size_;
  std::vector<VertexId> euler_;
};

// Euler tour + sparse table: O(n log n) build, O(1) query.
class LcaOracle {
 public:
  explicit LcaOracle(const RootedTree& t);
  VertexId lca(VertexId u, VertexId v) const;

 private:
  const RootedTree* tree_;
  std::vector<int> first_;
  std::vector<std::vector<VertexId>> table_;
};

struct DistilledTree {
  Tree tree;
  std::vector<Weight> edge_cut_weight;        // per tree edge: cutsize of the split it induces
  std::vector<Weight> subtree_vertex_weight;  // per tree edge: vertex weight on the child side
  std::vector<VertexId> child_of_edge;        // per tree edge: endpoint farther from the root
};

class TreeDistiller {
 public:
  explicit TreeDistiller(Tree t, VertexId root = 0);

  DistilledTree distill(const Hypergraph& h) const;
  // vertex_weights overrides h's weights for subtree_vertex_weight; hyperedges
  // with edge_active[e] == false are ignored.
  DistilledTree distill(const Hypergraph& h, std::span<const Weight> vertex_weights,
                        const std::vector<bool>* edge_active) const;

  const Tree& tree() const { return tree_; }
  const RootedTree& rooted() const { return rooted_; }
  const LcaOracle& lca() const { return lca_; }
  // Vertices on the child side of tree edge i.
  std::span<const VertexId> below(std::size_t edge) const;

 private:
  Tree tree_;
  RootedTree rooted_;
  LcaOracle lca_;
  std::vector<VertexId> child_of_edge_;
};

inline DistilledTree distill(const Hypergraph& h, const Tree& t) { return TreeDistiller(t).distill(h); }

}  // namespace ksp
