#include "kspecpart/treepart.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "kspecpart/parallel.hpp"

namespace ksp {
namespace {

struct Carver {
  const Hypergraph& h;
  const TreeDistiller& td;
  BlockId k;
  std::vector<BlockId> labels;
  std::vector<bool> fixed;
  std::vector<Weight> weights;
  std::vector<bool> edge_active;
  Weight remaining;

  Carver(const Hypergraph& hg, const TreeDistiller& t, BlockId blocks)
      : h(hg),
        td(t),
        k(blocks),
        labels(hg.num_vertices(), blocks - 1),
        fixed(hg.num_vertices(), false),
        weights(hg.vertex_weights()),
        edge_active(hg.num_edges(), true),
        remaining(hg.total_vertex_weight()) {}

  // Distilled tree over the unfixed part plus the mask of edges whose child
  // side still holds an unfixed vertex.
  std::pair<DistilledTree, std::vector<bool>> distill_level() const {
    DistilledTree dt = td.distill(h, weights, &edge_active);
    const RootedTree& r = td.rooted();
    std::vector<VertexId> unfixed_below(r.num_vertices(), 0);
    for (VertexId v : r.post_order()) {
      unfixed_below[v] += !fixed[v];
      if (r.parent(v) >= 0) unfixed_below[r.parent(v)] += unfixed_below[v];
    }
    std::vector<bool> allowed(dt.child_of_edge.size());
    for (std::size_t i = 0; i < allowed.size(); ++i) allowed[i] = unfixed_below[dt.child_of_edge[i]] > 0;
    return {std::move(dt), std::move(allowed)};
  }

  void carve(std::size_t edge, BlockId block) {
    for (VertexId v : td.below(edge)) {
      if (fixed[v]) continue;
      fixed[v] = true;
      labels[v] = block;
      remaining -= weights[v];
      weights[v] = 0;
    }
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      if (!edge_active[e]) continue;
      const auto pins = h.pins(e);
      edge_active[e] = !std::all_of(pins.begin(), pins.end(), [&](VertexId v) { return fixed[v]; });
    }
  }

  static bool any(const std::vector<bool>& mask) { return std::find(mask.begin(), mask.end(), true) != mask.end(); }
};

}  // namespace

SweepChoice sweep_edge(const DistilledTree& dt, Weight total, Weight lo, Weight hi, const std::vector<bool>* allowed) {
  const std::size_t m = dt.edge_cut_weight.size();
  auto ok = [&](std::size_t i) { return !allowed || (*allowed)[i]; };
  SweepChoice best;
  bool have = false;
  for (std::size_t i = 0; i < m; ++i) {
    const Weight below = dt.subtree_vertex_weight[i];
    if (!ok(i) || below < lo || below > hi) continue;
    const Weight cut = dt.edge_cut_weight[i];
    const auto skew = [&](Weight b) { return std::abs(2 * b - (lo + hi)); };
    if (!have || cut < best.cut || (cut == best.cut && skew(below) < skew(best.below_weight))) {
      best = {i, cut, below, true};
      have = true;
    }
  }
  if (have) return best;

  // Ratio cut: compare c1 / d1 < c2 / d2 as c1 * d2 < c2 * d1; d = 0 is worst.
  bool have_ratio = false;
  __int128 best_den = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!ok(i)) continue;
    const Weight below = dt.subtree_vertex_weight[i];
    const __int128 den = static_cast<__int128>(below) * (total - below);
    const Weight cut = dt.edge_cut_weight[i];
    bool better;
    if (!have_ratio) {
      better = true;
    } else if (den <= 0 || best_den <= 0) {
      better = den > 0 && best_den <= 0;
    } else {
      better = static_cast<__int128>(cut) * best_den < static_cast<__int128>(best.cut) * den;
    }
    if (better) {
      best = {i, cut, below, false};
      best_den = den;
      have_ratio = true;
    }
  }
  if (!have_ratio) throw std::invalid_argument("sweep: no candidate tree edge");
  return best;
}

Partition sweep_bipartition(const Hypergraph& h, const TreeDistiller& td, double eps) {
  const VertexId n = h.num_vertices();
  if (n < 2) return Partition(std::vector<BlockId>(n, 0), 2);
  const DistilledTree dt = td.distill(h);
  const BalanceBounds b = balance_bounds(h.total_vertex_weight(), 2, eps);
  const SweepChoice c = sweep_edge(dt, h.total_vertex_weight(), b.lower, b.upper);
  std::vector<BlockId> labels(n, 1);
  for (VertexId v : td.below(c.edge)) labels[v] = 0;
  return Partition(std::move(labels), 2);
}

Partition vile_kway(const Hypergraph& h, const TreeDistiller& td, BlockId k, double eps) {
  if (k < 2) throw std::invalid_argument("vile_kway: k must be >= 2");
  Carver carver(h, td, k);
  const BalanceBounds b = balance_bounds(h.total_vertex_weight(), k, eps);
  for (BlockId i = 0; i + 1 < k; ++i) {
    auto [dt, allowed] = carver.distill_level();
    if (!Carver::any(allowed)) break;
    const SweepChoice c = sweep_edge(dt, carver.remaining, b.lower, b.upper, &allowed);
    carver.carve(c.edge, i);
  }
  return Partition(std::move(carver.labels), k);
}

Partition balanced_recursive_kway(const Hypergraph& h, const TreeDistiller& td, BlockId k, double eps,
                                  bool* fell_back) {
  if (k < 2) throw std::invalid_argument("balanced_recursive_kway: k must be >= 2");
  if (fell_back) *fell_back = false;
  Carver carver(h, td, k);
  const BalanceBounds b = balance_bounds(h.total_vertex_weight(), k, eps);
  for (BlockId i = 0; i + 1 < k; ++i) {
    auto [dt, allowed] = carver.distill_level();
    if (!Carver::any(allowed)) {
      if (fell_back) *fell_back = true;
      break;
    }
    const Weight later = k - i - 1;
    const Weight lo = std::max(b.lower, carver.remaining - later * b.upper);
    const Weight hi = std::min(b.upper, carver.remaining - later * b.lower);
    SweepChoice c{};
    if (lo <= hi) c = sweep_edge(dt, carver.remaining, lo, hi, &allowed);
    if (lo > hi || !c.feasible) {
      if (fell_back) *fell_back = true;
      c = sweep_edge(dt, carver.remaining, b.lower, b.upper, &allowed);
    }
    carver.carve(c.edge, i);
  }
  return Partition(std::move(carver.labels), k);
}

ScoredPartition score(const Hypergraph& h, Partition p, double eps) {
  const Weight cut = cutsize(h, p);
  const Weight violation = balance_violation(h, p, eps);
  return {std::move(p), cut, violation};
}

std::vector<Partition> raw_tree_candidates(const Hypergraph& h, const std::vector<Tree>& trees, BlockId k,
                                           double eps, int threads) {
  std::vector<Partition> out(2 * trees.size());
  parallel_for(trees.size(), threads, [&](std::size_t t) {
    const TreeDistiller td(trees[t]);
    out[2 * t] = k == 2 ? sweep_bipartition(h, td, eps) : vile_kway(h, td, k, eps);
    out[2 * t + 1] = balanced_recursive_kway(h, td, k, eps);
  });
  return out;
}

std::vector<ScoredPartition> partition_tree_family(const Hypergraph& h, const std::vector<Tree>& trees, BlockId k,
                                                   double eps, const FmConfig& fm, int threads) {
  std::vector<Partition> raw = raw_tree_candidates(h, trees, k, eps, threads);
  std::vector<ScoredPartition> refined(raw.size());
  parallel_for(raw.size(), threads, [&](std::size_t i) { refined[i] = score(h, fm_refine(h, raw[i], eps, fm), eps); });
  std::vector<ScoredPartition> out;
  std::set<std::vector<BlockId>> seen;
  for (auto& c : refined)
    if (seen.insert(c.partition.labels).second) out.push_back(std::move(c));
  return out;
}

}  // namespace ksp
