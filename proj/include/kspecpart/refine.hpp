#pragma once

#include <cstdint>

#include "kspecpart/hypergraph.hpp"

namespace ksp {

struct FmConfig {
  int max_passes = 10;
  // When false an imbalanced start is returned unchanged.
  bool allow_illegal_start = true;
  // Recompute the cutsize from scratch after every move and throw
  // std::logic_error on mismatch. Slow; for tests.
  bool verify_gains = false;
};

// K-way Fiduccia-Mattheyses. Each pass moves every vertex at most once,
// always taking the legal move of highest gain (ties: smaller vertex, then
// smaller destination block), and keeps the best prefix ranked by
// (balance violation, cutsize). A move is legal when it strictly lowers the
// total balance violation or leaves it at most 2 * max vertex weight, so a
// single vertex may be in transit and tight windows still admit swaps. While
// the partition is imbalanced, violation-reducing moves are preferred.
// Passes stop when one yields no improvement. The result is never worse than
// the input under the (violation, cutsize) order.
Partition fm_refine(const Hypergraph& h, const Partition& s, double eps, const FmConfig& cfg = {});

// Multi-start: each restart builds a randomized greedy assignment (vertices by
// decreasing weight, shuffled within equal weights, each into the currently
// lightest block), repairs and refines it with FM. Returns the best result by
// (violation, cutsize). Throws InfeasibleError if k exceeds the vertex count
// or no balanced start is found in 100 attempts.
Partition baseline_partitioner(const Hypergraph& h, BlockId k, double eps, int restarts, std::uint64_t seed,
                               const FmConfig& cfg = {});

}  // namespace ksp
