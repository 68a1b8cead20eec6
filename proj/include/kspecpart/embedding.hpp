#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "kspecpart/eigensolver.hpp"
#include "kspecpart/operators.hpp"

namespace ksp {

// Everything about the hypergraph that the embedding needs and that does not
// depend on the hint: the clique-expansion and weight-balance operators, the
// random-cycle sparsifier and the preconditioner built from it.
struct EmbeddingContext {
  std::shared_ptr<const Hypergraph> hypergraph;
  LinearOperator clique;
  LinearOperator balance;
  SparseGraph sparsifier;
  Preconditioner precond;
};

// The sparsifier of h must be connected (callers bridge components first).
EmbeddingContext make_embedding_context(const Hypergraph& h, int zeta, std::uint64_t seed);

struct Embedding {
  Matrix coords;                   // |V| x d, rows are vertex coordinates
  Eigen::Index stacked_width = 0;  // K*m before LDA (m for two-way)
  std::vector<double> residuals;   // per solved eigenvector
  bool converged = true;
};

// Block 0 = V_j, block 1 = everything else. Throws if V_j is empty.
Partition one_vs_rest(const Partition& s, BlockId j);

// First m nontrivial eigenvectors of L_G x = lambda (L_Gw + L_Gh) x for the
// 2-way hint. If |V| - 1 < m the missing columns are zero.
Embedding two_way_embedding(const EmbeddingContext& ctx, const Partition& hint, int m,
                            const EigenOptions& opts);

struct KWayOptions {
  bool use_lda = true;
  int threads = 1;
};

// K = 2: two_way_embedding. K > 2: stack the K one-vs-rest embeddings
// (|V| x K*m) and reduce to m columns with LDA using the hint as class labels.
// With use_lda = false the stacked embedding is returned as is.
Embedding k_way_embedding(const EmbeddingContext& ctx, const Partition& hint, int m,
                          const EigenOptions& opts, const KWayOptions& kopts = {});

// Linear discriminant analysis: top-m eigenvectors of (S_W + r I)^{-1} S_B
// with r = 1e-6 trace(S_W) / d. When m exceeds the rank of S_B the projection
// is padded with leading principal directions of the within-class scatter
// restricted to the complement. Throws std::invalid_argument for < 2 classes
// or m > d.
Matrix lda_reduce(const Matrix& x, const std::vector<BlockId>& labels, int m);

// "vertex,c0,c1,..." rows for external plotting.
void write_embedding_csv(std::ostream& out, const Matrix& coords);

}  // namespace ksp
