#include "kspecpart/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kspecpart/errors.hpp"

namespace ksp {

Hypergraph::Hypergraph(std::vector<Weight> vertex_weights,
                       const std::vector<std::vector<VertexId>>& edges,
                       std::vector<Weight> edge_weights)
    : vertex_weights_(std::move(vertex_weights)), edge_weights_(std::move(edge_weights)) {
  const auto n = static_cast<VertexId>(vertex_weights_.size());
  if (edges.size() != edge_weights_.size()) {
    throw std::invalid_argument("hypergraph: edge and edge-weight counts differ");
  }
  for (Weight w : vertex_weights_) {
    if (w < 0) throw std::invalid_argument("hypergraph: negative vertex weight");
    total_vertex_weight_ += w;
  }
  if (n > 0 && total_vertex_weight_ <= 0) {
    throw std::invalid_argument("hypergraph: total vertex weight must be positive");
  }

  edge_offsets_.reserve(edges.size() + 1);
  std::vector<VertexId> buf;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edge_weights_[e] <= 0) {
      throw std::invalid_argument("hypergraph: hyperedge " + std::to_string(e) +
                                  " has nonpositive weight");
    }
    buf.assign(edges[e].begin(), edges[e].end());
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    if (buf.size() < 2) {
      throw std::invalid_argument("hypergraph: hyperedge " + std::to_string(e) +
                                  " has fewer than 2 distinct pins");
    }
    if (buf.front() < 0 || buf.back() >= n) {
      throw std::invalid_argument("hypergraph: hyperedge " + std::to_string(e) +
                                  " has a pin out of range");
    }
    pins_.insert(pins_.end(), buf.begin(), buf.end());
    edge_offsets_.push_back(pins_.size());
  }

  std::vector<std::size_t> degree(n + 1, 0);
  for (VertexId p : pins_) ++degree[p + 1];
  vertex_offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), vertex_offsets_.begin());
  incidence_.resize(pins_.size());
  std::vector<std::size_t> fill(vertex_offsets_.begin(), vertex_offsets_.end() - 1);
  for (EdgeId e = 0; e < num_edges(); ++e) {
    for (VertexId p : pins(e)) incidence_[fill[p]++] = e;
  }
}

Hypergraph Hypergraph::unit(VertexId n_vertices, const std::vector<std::vector<VertexId>>& edges) {
  return Hypergraph(std::vector<Weight>(n_vertices, 1), edges, std::vector<Weight>(edges.size(), 1));
}

Weight Hypergraph::total_edge_weight() const {
  return std::accumulate(edge_weights_.begin(), edge_weights_.end(), Weight{0});
}

std::vector<std::vector<VertexId>> Hypergraph::edge_list() const {
  std::vector<std::vector<VertexId>> out;
  out.reserve(num_edges());
  for (EdgeId e = 0; e < num_edges(); ++e) {
    auto p = pins(e);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

Partition::Partition(std::vector<BlockId> l, BlockId k_) : labels(std::move(l)), k(k_) {
  if (k < 1) throw std::invalid_argument("partition: k must be >= 1");
  for (BlockId b : labels) {
    if (b < 0 || b >= k) {
      throw std::invalid_argument("partition: label " + std::to_string(b) + " outside [0, " +
                                  std::to_string(k) + ")");
    }
  }
}

BalanceBounds balance_bounds(Weight total, BlockId k, double eps) {
  using i128 = __int128;
  constexpr std::int64_t kDen = 1'000'000'000;
  const auto eps_num = static_cast<std::int64_t>(std::llround(eps * static_cast<double>(kDen)));
  const i128 denom = static_cast<i128>(k) * kDen;
  const i128 lo_num = static_cast<i128>(kDen) - static_cast<i128>(k) * eps_num;
  const i128 hi_num = static_cast<i128>(kDen) + static_cast<i128>(k) * eps_num;

  BalanceBounds b;
  if (lo_num > 0) {
    const i128 prod = static_cast<i128>(total) * lo_num;
    b.lower = static_cast<Weight>((prod + denom - 1) / denom);
  }
  b.upper = static_cast<Weight>(static_cast<i128>(total) * hi_num / denom);
  return b;
}

std::vector<Weight> block_weights(const Hypergraph& h, const Partition& s) {
  std::vector<Weight> w(s.k, 0);
  for (VertexId v = 0; v < h.num_vertices(); ++v) w[s[v]] += h.vertex_weight(v);
  return w;
}

Weight cutsize(const Hypergraph& h, const Partition& s) {
  Weight cut = 0;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    auto p = h.pins(e);
    const BlockId b = s[p[0]];
    if (std::any_of(p.begin() + 1, p.end(), [&](VertexId v) { return s[v] != b; })) {
      cut += h.edge_weight(e);
    }
  }
  return cut;
}

Weight balance_violation(const Hypergraph& h, const Partition& s, double eps) {
  const BalanceBounds bounds = balance_bounds(h.total_vertex_weight(), s.k, eps);
  Weight violation = 0;
  for (Weight w : block_weights(h, s)) {
    if (w > bounds.upper) violation += w - bounds.upper;
    if (w < bounds.lower) violation += bounds.lower - w;
  }
  return violation;
}

bool is_balanced(const Hypergraph& h, const Partition& s, double eps) {
  return balance_violation(h, s, eps) == 0;
}

std::vector<std::vector<VertexId>> connected_components(const Hypergraph& h) {
  const VertexId n = h.num_vertices();
  std::vector<VertexId> comp(n, -1);
  std::vector<char> edge_seen(h.num_edges(), 0);
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const auto id = static_cast<VertexId>(out.size());
    out.emplace_back();
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (EdgeId e : h.incident_edges(v)) {
        if (edge_seen[e]) continue;
        edge_seen[e] = 1;
        for (VertexId u : h.pins(e)) {
          if (comp[u] < 0) {
            comp[u] = id;
            stack.push_back(u);
          }
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

ClusteredHypergraph contract(const Hypergraph& h, const std::vector<VertexId>& cluster_of) {
  if (static_cast<VertexId>(cluster_of.size()) != h.num_vertices()) {
    throw std::invalid_argument("contract: cluster map size mismatch");
  }
  VertexId n_clusters = 0;
  for (VertexId c : cluster_of) {
    if (c < 0) throw std::invalid_argument("contract: negative cluster index");
    n_clusters = std::max(n_clusters, c + 1);
  }
  std::vector<Weight> weights(n_clusters, 0);
  std::vector<char> used(n_clusters, 0);
  for (VertexId v = 0; v < h.num_vertices(); ++v) {
    weights[cluster_of[v]] += h.vertex_weight(v);
    used[cluster_of[v]] = 1;
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw std::invalid_argument("contract: cluster indices are not dense");
  }

  // Ordered map keeps coarse edge order deterministic (first occurrence wins).
  std::map<std::vector<VertexId>, EdgeId> index;
  std::vector<std::vector<VertexId>> edges;
  std::vector<Weight> edge_weights;
  std::vector<VertexId> buf;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    buf.clear();
    for (VertexId v : h.pins(e)) buf.push_back(cluster_of[v]);
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    if (buf.size() < 2) continue;
    auto [it, inserted] = index.try_emplace(buf, static_cast<EdgeId>(edges.size()));
    if (inserted) {
      edges.push_back(buf);
      edge_weights.push_back(h.edge_weight(e));
    } else {
      edge_weights[it->second] += h.edge_weight(e);
    }
  }
  return {Hypergraph(std::move(weights), edges, std::move(edge_weights)), cluster_of};
}

Partition lift(const ClusteredHypergraph& ch, const Partition& coarse) {
  std::vector<BlockId> labels(ch.cluster_of.size());
  for (std::size_t v = 0; v < labels.size(); ++v) labels[v] = coarse[ch.cluster_of[v]];
  return Partition(std::move(labels), coarse.k);
}

bool project(const ClusteredHypergraph& ch, const Partition& fine, Partition& out) {
  std::vector<BlockId> labels(ch.coarse.num_vertices(), -1);
  for (std::size_t v = 0; v < ch.cluster_of.size(); ++v) {
    BlockId& slot = labels[ch.cluster_of[v]];
    if (slot < 0) {
      slot = fine.labels[v];
    } else if (slot != fine.labels[v]) {
      return false;
    }
  }
  out = Partition(std::move(labels), fine.k);
  return true;
}

Partition brute_force_optimal(const Hypergraph& h, BlockId k, double eps) {
  const VertexId n = h.num_vertices();
  if (k < 1) throw std::invalid_argument("brute force: k must be >= 1");
  double space = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (space > 1e8) throw std::invalid_argument("brute force: k^n exceeds 1e8");
  if (n == 0) throw InfeasibleError("no balanced partition: empty hypergraph");

  const BalanceBounds bounds = balance_bounds(h.total_vertex_weight(), k, eps);
  std::vector<BlockId> labels(n, 0);
  std::vector<BlockId> best;
  Weight best_cut = -1;
  std::vector<Weight> bw(k);
  Partition scratch(std::vector<BlockId>(n, 0), k);

  // Odometer over vertices 1..n-1; vertex 0 stays in block 0.
  while (true) {
    std::fill(bw.begin(), bw.end(), 0);
    for (VertexId v = 0; v < n; ++v) bw[labels[v]] += h.vertex_weight(v);
    if (std::all_of(bw.begin(), bw.end(), [&](Weight w) { return bounds.contains(w); })) {
      scratch.labels = labels;
      const Weight c = cutsize(h, scratch);
      if (best_cut < 0 || c < best_cut) {
        best_cut = c;
        best = labels;
      }
    }
    VertexId pos = 1;
    while (pos < n && ++labels[pos] == k) labels[pos++] = 0;
    if (pos >= n) break;
  }
  if (best_cut < 0) throw InfeasibleError("no balanced partition exists");
  return Partition(std::move(best), k);
}

}  // namespace ksp
