#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kspecpart/hypergraph.hpp"

namespace ksp {

struct KspConfig {
  BlockId k = 2;
  double eps = 0.02;
  int m = 2;       // eigenvectors per embedding
  int delta = 5;   // solutions overlaid per ensemble
  int beta = 2;    // supervision iterations
  int zeta = 2;    // random cycles per hyperedge in the sparsifier
  int gamma = 500; // largest clustered instance handed to branch and bound
  std::uint64_t seed = 1;
  double eigen_tol = 1e-6;
  int eigen_max_iter = 200;
  int fm_passes = 10;
  double bb_time_limit = 30.0;
  std::uint64_t bb_max_nodes = 0;
  bool use_lda = true;
  int threads = 0;  // 0: KSPECPART_THREADS or hardware concurrency
  std::string export_coarse_prefix;

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

struct IterationReport {
  Weight hint_cutsize = 0;
  std::vector<double> eigen_residuals;
  bool eigen_converged = true;
  std::size_t n_candidates = 0;
  Weight best_tree_cutsize = 0;
  Weight ensemble_cutsize = 0;
  VertexId coarse_vertices = 0;
  EdgeId coarse_edges = 0;
  bool proved_optimal = false;
  double seconds = 0.0;
};

struct KspReport {
  VertexId vertices = 0;
  EdgeId hyperedges = 0;
  BlockId k = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int bridge_edges = 0;
  std::vector<IterationReport> iterations;
  Weight initial_cutsize = 0;
  Weight final_cutsize = 0;
  std::vector<double> balance;  // block weight fractions
  bool balanced = false;
  double seconds = 0.0;
  std::string diagnostic;
};

struct KspResult {
  Partition partition;
  KspReport report;
};

// h plus unit 2-pin hyperedges joining the smallest vertex of the first
// component to the smallest vertex of every other component.
Hypergraph bridge_components(const Hypergraph& h, int* added = nullptr);

// Supervised spectral loop: beta rounds of embedding with the current hint,
// tree family, tree partitioning with FM, and ensembling of the tree
// solutions together with the hint; then one ensemble over s_init and every
// round's output. A failing round ends the loop with a diagnostic; the result
// is never worse than s_init under (violation, cutsize).
KspResult run_kspecpart(const Hypergraph& h, const Partition& s_init, const KspConfig& cfg);

// One ensemble call on externally supplied solutions.
KspResult run_overlay_only(const Hypergraph& h, const std::vector<Partition>& pool, const KspConfig& cfg);

// JSON document: {input, iterations, final}. Without timings every seconds
// field is written as 0 so reports of identical runs are byte-identical.
std::string report_json(const KspReport& report, bool include_timings = true);

}  // namespace ksp
