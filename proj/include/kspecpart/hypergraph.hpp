#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ksp {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using BlockId = std::int32_t;
using Weight = std::int64_t;

// Weighted hypergraph in CSR form, with the vertex -> incident-edge incidence
// precomputed. Immutable after construction.
//
// Invariants: every hyperedge holds >= 2 distinct pins in [0, n), pins of a
// hyperedge are stored sorted, hyperedge weights are > 0, vertex weights are
// >= 0 and their total is > 0 (for n > 0).
class Hypergraph {
 public:
  Hypergraph() = default;

  // Pins are deduplicated and sorted. Throws std::invalid_argument on any
  // invariant violation.
  Hypergraph(std::vector<Weight> vertex_weights, const std::vector<std::vector<VertexId>>& edges,
             std::vector<Weight> edge_weights);

  // Unit vertex and edge weights.
  static Hypergraph unit(VertexId n_vertices, const std::vector<std::vector<VertexId>>& edges);

  VertexId num_vertices() const { return static_cast<VertexId>(vertex_weights_.size()); }
  EdgeId num_edges() const { return static_cast<EdgeId>(edge_weights_.size()); }
  std::size_t num_pins() const { return pins_.size(); }

  std::span<const VertexId> pins(EdgeId e) const {
    return {pins_.data() + edge_offsets_[e], pins_.data() + edge_offsets_[e + 1]};
  }
  std::span<const EdgeId> incident_edges(VertexId v) const {
    return {incidence_.data() + vertex_offsets_[v], incidence_.data() + vertex_offsets_[v + 1]};
  }
  std::size_t edge_size(EdgeId e) const { return edge_offsets_[e + 1] - edge_offsets_[e]; }

  Weight vertex_weight(VertexId v) const { return vertex_weights_[v]; }
  Weight edge_weight(EdgeId e) const { return edge_weights_[e]; }
  const std::vector<Weight>& vertex_weights() const { return vertex_weights_; }
  const std::vector<Weight>& edge_weights() const { return edge_weights_; }
  Weight total_vertex_weight() const { return total_vertex_weight_; }
  Weight total_edge_weight() const;

  // Copy of the edge list (pins per hyperedge).
  std::vector<std::vector<VertexId>> edge_list() const;

 private:
  std::vector<Weight> vertex_weights_;
  std::vector<Weight> edge_weights_;
  std::vector<std::size_t> edge_offsets_{0};
  std::vector<VertexId> pins_;
  std::vector<std::size_t> vertex_offsets_{0};
  std::vector<EdgeId> incidence_;
  Weight total_vertex_weight_ = 0;
};

// Block label per vertex, labels in [0, k).
struct Partition {
  std::vector<BlockId> labels;
  BlockId k = 0;

  Partition() = default;
  // Throws std::invalid_argument if a label is outside [0, k) or k < 1.
  Partition(std::vector<BlockId> labels, BlockId k);

  VertexId size() const { return static_cast<VertexId>(labels.size()); }
  BlockId operator[](VertexId v) const { return labels[v]; }

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Contracted hypergraph plus the fine-vertex -> cluster map used for lifting.
struct ClusteredHypergraph {
  Hypergraph coarse;
  std::vector<VertexId> cluster_of;
};

// Allowed block weight range for an epsilon-balanced k-way partition, as
// integer weights: lower = ceil(max(0, 1/k - eps) * W), upper = floor((1/k + eps) * W).
// eps is interpreted as an exact decimal with 9 fractional digits.
struct BalanceBounds {
  Weight lower = 0;
  Weight upper = 0;

  bool contains(Weight w) const { return lower <= w && w <= upper; }
};

BalanceBounds balance_bounds(Weight total, BlockId k, double eps);

// Weight of each block.
std::vector<Weight> block_weights(const Hypergraph& h, const Partition& s);

// Sum of w_e over hyperedges whose pins lie in >= 2 blocks.
Weight cutsize(const Hypergraph& h, const Partition& s);

bool is_balanced(const Hypergraph& h, const Partition& s, double eps);

// Total weight by which blocks fall outside the balance bounds; 0 iff balanced.
Weight balance_violation(const Hypergraph& h, const Partition& s, double eps);

// Components of the incidence structure, each sorted, ordered by smallest vertex.
std::vector<std::vector<VertexId>> connected_components(const Hypergraph& h);

// Contract clusters (indices dense in [0, n_clusters)). Coarse vertex weights
// are member sums; hyperedges with < 2 distinct clusters are dropped and
// hyperedges with identical cluster sets are merged with summed weight.
ClusteredHypergraph contract(const Hypergraph& h, const std::vector<VertexId>& cluster_of);

// Coarse labels -> fine labels.
Partition lift(const ClusteredHypergraph& ch, const Partition& coarse);

// Fine labels -> coarse labels, taking each cluster's block from its members.
// Returns false (leaving `out` unspecified) if some cluster is not monochromatic.
bool project(const ClusteredHypergraph& ch, const Partition& fine, Partition& out);

// Exhaustive minimum-cut eps-balanced partition. Vertex 0 is pinned to block 0.
// Requires k^(n-1) <= 1e8. Throws InfeasibleError if no balanced assignment exists.
Partition brute_force_optimal(const Hypergraph& h, BlockId k, double eps);

}  // namespace ksp
