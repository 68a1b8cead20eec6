#include "kspecpart/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "kspecpart/errors.hpp"
#include "kspecpart/io.hpp"
#include "kspecpart/log.hpp"

namespace ksp {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(VertexId n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  VertexId find(VertexId v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<VertexId> parent_;
};

using Key = std::pair<Weight, Weight>;  // (violation, cut)

Key key_of(const Hypergraph& h, const Partition& p, double eps) {
  return {balance_violation(h, p, eps), cutsize(h, p)};
}

class BranchAndBound {
 public:
  BranchAndBound(const Hypergraph& h, BlockId k, double eps, const BbOptions& opts)
      : h_(h),
        k_(k),
        bounds_(balance_bounds(h.total_vertex_weight(), k, eps)),
        opts_(opts),
        order_(h.num_vertices()),
        labels_(h.num_vertices(), -1),
        load_(k, 0),
        pins_in_(static_cast<std::size_t>(h.num_edges()) * k, 0),
        spans_(h.num_edges(), 0),
        position_(h.num_vertices(), 0),
        owned_(static_cast<std::size_t>(h.num_vertices()) * k, 0) {
    connectivity_order();
    for (std::size_t i = 0; i < order_.size(); ++i) position_[order_[i]] = static_cast<VertexId>(i);
    sorted_pins_.resize(h.num_edges());
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      auto pins = h.pins(e);
      sorted_pins_[e].assign(pins.begin(), pins.end());
      std::sort(sorted_pins_[e].begin(), sorted_pins_[e].end(),
                [&](VertexId a, VertexId b) { return position_[a] < position_[b]; });
    }
    suffix_weight_.assign(order_.size() + 1, 0);
    for (std::size_t i = order_.size(); i-- > 0;) suffix_weight_[i] = suffix_weight_[i + 1] + h.vertex_weight(order_[i]);
  }

  void run(Weight incumbent_cut) {
    best_cut_ = incumbent_cut;
    start_ = std::chrono::steady_clock::now();
    search(0, 0, 0);
  }

  bool complete() const { return !aborted_; }
  bool found() const { return !best_.empty(); }
  const std::vector<BlockId>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool out_of_budget() {
    if (opts_.max_nodes > 0 && nodes_ >= opts_.max_nodes) return true;
    if (opts_.time_limit_seconds > 0 && (nodes_ & 4095) == 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > opts_.time_limit_seconds) timed_out_ = true;
    }
    return timed_out_;
  }

  Weight added_cut(VertexId v, BlockId b) {
    Weight add = 0;
    for (EdgeId e : h_.incident_edges(v))
      if (spans_[e] == 1 && pins_in_[static_cast<std::size_t>(e) * k_ + b] == 0) add += h_.edge_weight(e);
    return add;
  }

  void assign(VertexId v, BlockId b) {
    labels_[v] = b;
    load_[b] += h_.vertex_weight(v);
    for (EdgeId e : h_.incident_edges(v))
      if (pins_in_[static_cast<std::size_t>(e) * k_ + b]++ == 0) ++spans_[e];
  }

  void unassign(VertexId v, BlockId b) {
    labels_[v] = -1;
    load_[b] -= h_.vertex_weight(v);
    for (EdgeId e : h_.incident_edges(v))
      if (--pins_in_[static_cast<std::size_t>(e) * k_ + b] == 0) --spans_[e];
  }

  // Heaviest vertex first, then repeatedly the vertex with the largest
  // weight of hyperedges already touched by the order, so hyperedges close
  // early in the search.
  void connectivity_order() {
    const VertexId n = h_.num_vertices();
    std::vector<Weight> attach(n, 0);
    std::vector<bool> placed(n, false), touched(h_.num_edges(), false);
    auto better = [&](VertexId a, VertexId b) {
      if (attach[a] != attach[b]) return attach[a] > attach[b];
      if (h_.vertex_weight(a) != h_.vertex_weight(b)) return h_.vertex_weight(a) > h_.vertex_weight(b);
      return a < b;
    };
    for (VertexId i = 0; i < n; ++i) {
      VertexId pick = -1;
      for (VertexId v = 0; v < n; ++v)
        if (!placed[v] && (pick < 0 || better(v, pick))) pick = v;
      placed[pick] = true;
      order_[i] = pick;
      for (EdgeId e : h_.incident_edges(pick)) {
        if (touched[e]) continue;
        touched[e] = true;
        for (VertexId u : h_.pins(e))
          if (!placed[u]) attach[u] += h_.edge_weight(e);
      }
    }
  }

  // Every uncut hyperedge whose assigned pins share one block is charged to
  // its first unassigned pin; each such pin pays at least the hyperedges it
  // is charged with that it cannot join in any single block.
  Weight future_cut(std::size_t depth) {
    owners_.clear();
    for (EdgeId e = 0; e < h_.num_edges(); ++e) {
      if (spans_[e] != 1) continue;
      const auto& pins = sorted_pins_[e];
      if (static_cast<std::size_t>(position_[pins.back()]) < depth) continue;
      VertexId owner = -1, anchor = -1;
      for (VertexId u : pins) {
        if (static_cast<std::size_t>(position_[u]) >= depth) {
          owner = u;
          break;
        }
        anchor = u;
      }
      if (anchor < 0) continue;
      const std::size_t base = static_cast<std::size_t>(owner) * k_;
      bool fresh = true;
      for (BlockId b = 0; b < k_ && fresh; ++b) fresh = owned_[base + b] == 0;
      if (fresh) owners_.push_back(owner);
      owned_[base + labels_[anchor]] += h_.edge_weight(e);
    }
    Weight bound = 0;
    for (VertexId v : owners_) {
      const std::size_t base = static_cast<std::size_t>(v) * k_;
      Weight total = 0, keep = 0;
      for (BlockId b = 0; b < k_; ++b) {
        total += owned_[base + b];
        if (load_[b] + h_.vertex_weight(v) <= bounds_.upper) keep = std::max(keep, owned_[base + b]);
        owned_[base + b] = 0;
      }
      bound += total - keep;
    }
    return bound;
  }

  bool can_still_balance(std::size_t next) const {
    Weight deficit = 0;
    for (BlockId b = 0; b < k_; ++b) {
      if (load_[b] > bounds_.upper) return false;
      deficit += std::max<Weight>(0, bounds_.lower - load_[b]);
    }
    return deficit <= suffix_weight_[next];
  }

  void search(std::size_t depth, Weight cut, BlockId used) {
    ++nodes_;
    if (aborted_ || out_of_budget()) {
      aborted_ = true;
      return;
    }
    if (depth == order_.size()) {
      for (BlockId b = 0; b < k_; ++b)
        if (!bounds_.contains(load_[b])) return;
      best_cut_ = cut;
      best_ = labels_;
      return;
    }
    const VertexId v = order_[depth];
    const BlockId limit = std::min<BlockId>(k_, used + 1);
    std::vector<std::pair<Weight, BlockId>> children;
    for (BlockId b = 0; b < limit; ++b) {
      if (load_[b] + h_.vertex_weight(v) > bounds_.upper) continue;
      children.emplace_back(added_cut(v, b), b);
    }
    std::sort(children.begin(), children.end());
    for (auto [add, b] : children) {
      if (cut + add >= best_cut_) break;
      assign(v, b);
      if (can_still_balance(depth + 1) && cut + add + future_cut(depth + 1) < best_cut_)
        search(depth + 1, cut + add, std::max<BlockId>(used, b + 1));
      unassign(v, b);
      if (aborted_) return;
    }
  }

  const Hypergraph& h_;
  BlockId k_;
  BalanceBounds bounds_;
  BbOptions opts_;
  std::vector<VertexId> order_;
  std::vector<Weight> suffix_weight_;
  std::vector<BlockId> labels_;
  std::vector<Weight> load_;
  std::vector<int> pins_in_;
  std::vector<int> spans_;
  std::vector<VertexId> position_;
  std::vector<std::vector<VertexId>> sorted_pins_;
  std::vector<Weight> owned_;
  std::vector<VertexId> owners_;
  std::vector<BlockId> best_;
  Weight best_cut_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  bool timed_out_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

OverlayResult cut_overlay_cluster(const Hypergraph& h, const std::vector<Partition>& pool, int delta, double eps) {
  if (pool.empty()) throw std::invalid_argument("cut_overlay_cluster: empty pool");
  if (delta < 1) throw std::invalid_argument("cut_overlay_cluster: delta must be >= 1");
  std::vector<std::tuple<Weight, Weight, std::size_t>> ranked;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].size() != h.num_vertices()) throw std::invalid_argument("cut_overlay_cluster: partition size mismatch");
    ranked.emplace_back(cutsize(h, pool[i]), balance_violation(h, pool[i], eps), i);
  }
  std::sort(ranked.begin(), ranked.end());
  ranked.resize(std::min<std::size_t>(ranked.size(), delta));

  OverlayResult out;
  std::vector<bool> cut(h.num_edges(), false);
  for (const auto& [c, viol, i] : ranked) {
    out.selected.push_back(i);
    const Partition& p = pool[i];
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      if (cut[e]) continue;
      const auto pins = h.pins(e);
      cut[e] = std::any_of(pins.begin(), pins.end(), [&](VertexId v) { return p[v] != p[pins[0]]; });
    }
  }
  DisjointSets sets(h.num_vertices());
  for (EdgeId e = 0; e < h.num_edges(); ++e)
    if (!cut[e])
      for (VertexId v : h.pins(e)) sets.unite(h.pins(e)[0], v);
  // Roots are the smallest members, so numbering roots in vertex order
  // numbers clusters by smallest member.
  std::vector<VertexId> cluster_of(h.num_vertices(), -1), id_of_root(h.num_vertices(), -1);
  VertexId next = 0;
  for (VertexId v = 0; v < h.num_vertices(); ++v) {
    const VertexId r = sets.find(v);
    if (id_of_root[r] < 0) id_of_root[r] = next++;
    cluster_of[v] = id_of_root[r];
  }
  out.clustered = contract(h, cluster_of);
  return out;
}

BbResult exact_partition_bb(const Hypergraph& h, BlockId k, double eps, const Partition& incumbent,
                            const BbOptions& opts) {
  if (k < 1) throw std::invalid_argument("exact_partition_bb: k must be >= 1");
  if (incumbent.size() != h.num_vertices() || incumbent.k != k)
    throw std::invalid_argument("exact_partition_bb: incumbent does not match the instance");
  const bool incumbent_ok = is_balanced(h, incumbent, eps);
  BranchAndBound bb(h, k, eps, opts);
  bb.run(incumbent_ok ? cutsize(h, incumbent) : std::numeric_limits<Weight>::max());
  BbResult out{incumbent, bb.complete(), bb.nodes()};
  if (bb.found()) out.partition = Partition(bb.best(), k);
  if (!bb.found() && !incumbent_ok && bb.complete()) throw InfeasibleError("no balanced partition exists");
  return out;
}

EnsembleResult ensemble(const Hypergraph& h, const std::vector<Partition>& pool, BlockId k, double eps,
                        const EnsembleConfig& cfg) {
  for (const Partition& p : pool)
    if (p.k != k) throw std::invalid_argument("ensemble: pool partition has the wrong block count");
  const OverlayResult overlay = cut_overlay_cluster(h, pool, cfg.delta, eps);
  const ClusteredHypergraph& ch = overlay.clustered;
  const Partition& best_pool = pool[overlay.selected.front()];

  EnsembleResult out;
  out.coarse_vertices = ch.coarse.num_vertices();
  out.coarse_edges = ch.coarse.num_edges();
  if (!cfg.export_prefix.empty()) {
    std::ofstream hgr(cfg.export_prefix + ".hgr");
    write_hmetis(hgr, ch.coarse);
    std::ofstream lp(cfg.export_prefix + ".lp");
    write_lp(lp, ch.coarse, k, eps);
  }

  Partition seed;
  if (!project(ch, best_pool, seed)) throw std::logic_error("ensemble: selected solution is not representable");

  Partition coarse = seed;
  if (ch.coarse.num_edges() <= cfg.gamma) {
    try {
      const BbResult r = exact_partition_bb(ch.coarse, k, eps, seed, cfg.bb);
      coarse = r.partition;
      out.used_exact = true;
      out.proved_optimal = r.proved_optimal;
    } catch (const InfeasibleError&) {
      log::warn("ensemble: clustered instance admits no balanced partition");
    }
  } else {
    coarse = fm_refine(ch.coarse, seed, eps, cfg.fm);
    try {
      const Partition alt = baseline_partitioner(ch.coarse, k, eps, 5, cfg.seed, cfg.fm);
      if (key_of(ch.coarse, alt, eps) < key_of(ch.coarse, coarse, eps)) coarse = alt;
    } catch (const InfeasibleError&) {
    }
  }

  Partition refined = fm_refine(h, lift(ch, coarse), eps, cfg.fm);
  if (key_of(h, best_pool, eps) < key_of(h, refined, eps)) refined = best_pool;
  out.cut = cutsize(h, refined);
  out.partition = std::move(refined);
  return out;
}

void write_lp(std::ostream& out, const Hypergraph& h, BlockId k, double eps) {
  const BalanceBounds b = balance_bounds(h.total_vertex_weight(), k, eps);
  out << "\\ min-cut balanced " << k << "-way partitioning\n";
  out << "Maximize\n obj:";
  bool first = true;
  for (EdgeId e = 0; e < h.num_edges(); ++e)
    for (BlockId i = 0; i < k; ++i) {
      out << (first ? " " : " + ") << h.edge_weight(e) << " y_" << e << "_" << i;
      first = false;
    }
  if (first) out << " 0 x_0_0";
  out << "\nSubject To\n";
  for (EdgeId e = 0; e < h.num_edges(); ++e)
    for (BlockId i = 0; i < k; ++i)
      for (VertexId v : h.pins(e)) out << " c_" << e << "_" << i << "_" << v << ": y_" << e << "_" << i << " - x_" << v << "_" << i << " <= 0\n";
  for (VertexId v = 0; v < h.num_vertices(); ++v) {
    out << " a_" << v << ":";
    for (BlockId i = 0; i < k; ++i) out << (i ? " + " : " ") << "x_" << v << "_" << i;
    out << " = 1\n";
  }
  for (BlockId i = 0; i < k; ++i) {
    out << " w_" << i << ":";
    for (VertexId v = 0; v < h.num_vertices(); ++v) out << (v ? " + " : " ") << h.vertex_weight(v) << " x_" << v << "_" << i;
    out << " >= " << b.lower << "\n W_" << i << ":";
    for (VertexId v = 0; v < h.num_vertices(); ++v) out << (v ? " + " : " ") << h.vertex_weight(v) << " x_" << v << "_" << i;
    out << " <= " << b.upper << "\n";
  }
  out << "Binary\n";
  for (VertexId v = 0; v < h.num_vertices(); ++v)
    for (BlockId i = 0; i < k; ++i) out << " x_" << v << "_" << i << "\n";
  for (EdgeId e = 0; e < h.num_edges(); ++e)
    for (BlockId i = 0; i < k; ++i) out << " y_" << e << "_" << i << "\n";
  out << "End\n";
}

}  // namespace ksp
