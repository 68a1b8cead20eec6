#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "kspecpart/hypergraph.hpp"

namespace ksp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Matrix-free symmetric operator on R^dim. The apply function writes A*x into
// y (y has the right size and is overwritten). Copies share the closure.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(const Vector& x, Vector& y)>;

  LinearOperator() = default;
  LinearOperator(Eigen::Index dim, ApplyFn fn);

  Eigen::Index dimension() const { return dim_; }
  Vector apply(const Vector& x) const;
  // Column-wise application.
  Matrix apply_block(const Matrix& x) const;

  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);

 private:
  Eigen::Index dim_ = 0;
  std::shared_ptr<const ApplyFn> fn_;
};

// Explicit weighted graph; parallel edges allowed, weights add in the Laplacian.
struct SparseGraph {
  struct Edge {
    VertexId u;
    VertexId v;
    double w;
  };
  VertexId n_vertices = 0;
  std::vector<Edge> edges;

  bool is_connected() const;
};

// Laplacian of the clique expansion: each hyperedge e is a clique with edge
// weight w_e / (|e| - 1). O(sum |e|) per apply.
LinearOperator clique_laplacian(std::shared_ptr<const Hypergraph> h);
LinearOperator clique_laplacian(const Hypergraph& h);

// Laplacian of the complete graph with edge weights w_u * w_v, so that
// x_S^T L x_S = W_S * W_{V-S} for any 0-1 indicator. O(|V|) per apply.
LinearOperator weight_balance_laplacian(std::vector<Weight> vertex_weights);

// Laplacian of the complete bipartite graph between the two blocks of a
// 2-way partition. Throws std::invalid_argument if a block is empty.
LinearOperator hint_laplacian(const Partition& two_way);

LinearOperator graph_laplacian(std::shared_ptr<const SparseGraph> g);
LinearOperator graph_laplacian(const SparseGraph& g);

// Replace each hyperedge by zeta random cycles over its pins, each edge
// weighted w_e / zeta. A 2-pin hyperedge contributes one edge per cycle.
SparseGraph build_sparsifier(const Hypergraph& h, int zeta, std::uint64_t seed);

}  // namespace ksp
