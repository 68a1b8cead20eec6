#pragma once

#include <vector>

#include "kspecpart/distill.hpp"
#include "kspecpart/refine.hpp"

namespace ksp {

struct SweepChoice {
  std::size_t edge = 0;
  Weight cut = 0;
  Weight below_weight = 0;
  bool feasible = false;  // false: picked by the ratio-cut fallback
};

// Tree edge whose child-side weight lies in [lo, hi] with the least distilled
// cut; ties by |2 * below - (lo + hi)|, then edge index. If no edge fits,
// minimizes cut / (below * (total - below)). `allowed`, when given, masks
// edges out of consideration. Requires at least one tree edge.
SweepChoice sweep_edge(const DistilledTree& dt, Weight total, Weight lo, Weight hi,
                       const std::vector<bool>* allowed = nullptr);

// Two-way partition with the child side of the chosen edge in block 0,
// using the eps window of a 2-way split.
Partition sweep_bipartition(const Hypergraph& h, const TreeDistiller& td, double eps);

// VILE: K-1 levels, each carving from the unfixed vertices the child side of
// a sweep edge whose unfixed weight lies in [(1/K - eps) W, (1/K + eps) W].
// Carved vertices become fixed with weight 0, hyperedges whose pins are all
// fixed are ignored by later levels, and the remainder forms block K-1. The
// result may violate global balance.
Partition vile_kway(const Hypergraph& h, const TreeDistiller& td, BlockId k, double eps);

// Recursive carving with the window tightened at level i to
//   [max(lo, R - (K-i-1) hi), min(hi, R - (K-i-1) lo)]
// (R = unfixed weight), so the final partition is eps-balanced. A level with
// no edge in that window uses the VILE window (then the ratio fallback) and
// sets *fell_back.
Partition balanced_recursive_kway(const Hypergraph& h, const TreeDistiller& td, BlockId k, double eps,
                                  bool* fell_back = nullptr);

struct ScoredPartition {
  Partition partition;
  Weight cut = 0;
  Weight violation = 0;
};

// Per tree, the VILE and the balanced-recursive candidates (for K = 2 the
// plain sweep and the balanced variant), unrefined: 2 per tree.
std::vector<Partition> raw_tree_candidates(const Hypergraph& h, const std::vector<Tree>& trees, BlockId k,
                                           double eps, int threads = 1);

// raw_tree_candidates, each FM-refined, with exact duplicates removed
// (first occurrence kept).
std::vector<ScoredPartition> partition_tree_family(const Hypergraph& h, const std::vector<Tree>& trees, BlockId k,
                                                   double eps, const FmConfig& fm = {}, int threads = 1);

ScoredPartition score(const Hypergraph& h, Partition p, double eps);

}  // namespace ksp
