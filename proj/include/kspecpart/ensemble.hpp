#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kspecpart/hypergraph.hpp"
#include "kspecpart/refine.hpp"

namespace ksp {

struct OverlayResult {
  ClusteredHypergraph clustered;
  std::vector<std::size_t> selected;  // pool indices, best first
};

// Picks the best min(delta, |pool|) solutions by (cutsize, violation, index),
// removes every hyperedge cut by any of them and contracts the connected
// components of what is left (clusters numbered by smallest member).
OverlayResult cut_overlay_cluster(const Hypergraph& h, const std::vector<Partition>& pool, int delta, double eps);

struct BbOptions {
  double time_limit_seconds = 30.0;  // <= 0: unlimited
  std::uint64_t max_nodes = 0;       // 0: unlimited; a deterministic budget
};

struct BbResult {
  Partition partition;
  bool proved_optimal = false;
  std::uint64_t nodes = 0;
};

// Depth-first branch and bound for the min-cut eps-balanced k-way problem.
// Vertices are branched on in order of decreasing weight; the first goes to
// block 0 and a new block may only open after all lower-numbered ones. A node
// is pruned when its committed cut (hyperedges already spanning two blocks)
// reaches the incumbent, when a block overflows, or when the unassigned weight
// cannot lift every block to the lower bound. Only strictly better solutions
// replace the incumbent, so an optimal incumbent comes back unchanged. Throws
// InfeasibleError if the search completes without a balanced solution and the
// incumbent is imbalanced.
BbResult exact_partition_bb(const Hypergraph& h, BlockId k, double eps, const Partition& incumbent,
                            const BbOptions& opts = {});

struct EnsembleConfig {
  int delta = 5;
  int gamma = 500;
  BbOptions bb;
  FmConfig fm;
  std::uint64_t seed = 1;
  // When nonempty, the clustered instance is written as <prefix>.hgr and the
  // integer program as <prefix>.lp.
  std::string export_prefix;
};

struct EnsembleResult {
  Partition partition;
  Weight cut = 0;
  VertexId coarse_vertices = 0;
  EdgeId coarse_edges = 0;
  bool used_exact = false;
  bool proved_optimal = false;
};

// Cut-overlay clustering of the pool, coarse solve (branch and bound when the
// coarse instance has at most gamma hyperedges, otherwise the baseline
// partitioner plus FM from the projected best solution), lift, FM on h, and
// finally the better of that and the best pool solution.
EnsembleResult ensemble(const Hypergraph& h, const std::vector<Partition>& pool, BlockId k, double eps,
                        const EnsembleConfig& cfg = {});

// CPLEX LP text of the partitioning integer program: binaries x_v_i, y_e_i;
// maximize the uncut weight sum w_e y_e_i subject to y_e_i <= x_v_i for
// v in e, sum_i x_v_i = 1, lower <= sum_v w_v x_v_i <= upper.
void write_lp(std::ostream& out, const Hypergraph& h, BlockId k, double eps);

}  // namespace ksp
