#include "kspecpart/refine.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>

#include "kspecpart/errors.hpp"
#include "kspecpart/log.hpp"
#include "kspecpart/parallel.hpp"

namespace ksp {
namespace {

struct Candidate {
  Weight gain;
  VertexId v;
  BlockId to;
  std::uint32_t stamp;
};

struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.v != b.v) return a.v > b.v;
    return a.to > b.to;
  }
};

using CandidateHeap = std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder>;

class FmState {
 public:
  FmState(const Hypergraph& h, const Partition& s, BalanceBounds bounds)
      : h_(h),
        k_(s.k),
        bounds_(bounds),
        labels_(s.labels),
        block_weight_(k_, 0),
        pin_count_(static_cast<std::size_t>(h.num_edges()) * k_, 0) {
    for (VertexId v = 0; v < h.num_vertices(); ++v) block_weight_[labels_[v]] += h.vertex_weight(v);
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      for (VertexId v : h.pins(e)) ++count(e, labels_[v]);
      if (connectivity(e) > 1) cut_ += h.edge_weight(e);
    }
    for (BlockId b = 0; b < k_; ++b) violation_ += excess(block_weight_[b]);
    for (VertexId v = 0; v < h.num_vertices(); ++v) slack_ = std::max(slack_, 2 * h.vertex_weight(v));
  }

  Weight cut() const { return cut_; }
  Weight violation() const { return violation_; }
  const std::vector<BlockId>& labels() const { return labels_; }

  // One pass; returns true if it improved (violation, cut).
  bool pass(const FmConfig& cfg) {
    const VertexId n = h_.num_vertices();
    locked_.assign(n, false);
    pos_.assign(static_cast<std::size_t>(n) * k_, 0);
    neg_.assign(n, 0);
    stamp_.assign(static_cast<std::size_t>(n) * k_, 0);
    heaps_.assign(static_cast<std::size_t>(k_) * k_, CandidateHeap{});
    for (VertexId v = 0; v < n; ++v)
      for (EdgeId e : h_.incident_edges(v)) add_contribution(e, v, +1);
    for (VertexId v = 0; v < n; ++v) push_all(v);

    const auto start = std::pair(violation_, cut_);
    auto best = start;
    std::vector<std::pair<VertexId, BlockId>> moves;  // (vertex, previous block)
    std::size_t best_len = 0;
    Candidate c{};
    while (select(c)) {
      const BlockId from = labels_[c.v];
      move(c.v, c.to);
      moves.emplace_back(c.v, from);
      if (cfg.verify_gains) verify();
      if (std::pair(violation_, cut_) < best) {
        best = {violation_, cut_};
        best_len = moves.size();
      }
    }
    locked_.clear();  // rollback moves only maintain labels, weights and cut
    while (moves.size() > best_len) {
      auto [v, from] = moves.back();
      moves.pop_back();
      move(v, from);
    }
    return best < start;
  }

 private:
  int& count(EdgeId e, BlockId b) { return pin_count_[static_cast<std::size_t>(e) * k_ + b]; }
  int connectivity(EdgeId e) {
    int lambda = 0;
    for (BlockId b = 0; b < k_; ++b) lambda += count(e, b) > 0;
    return lambda;
  }
  Weight excess(Weight w) const {
    return std::max<Weight>(0, bounds_.lower - w) + std::max<Weight>(0, w - bounds_.upper);
  }

  // Contribution of hyperedge e to the gains of pin u: -w to every
  // destination if all pins share u's block; +w to block b if u is alone in
  // its block and every other pin sits in b.
  void add_contribution(EdgeId e, VertexId u, int sign) {
    const auto pins = h_.pins(e);
    const int size = static_cast<int>(pins.size());
    const BlockId l = labels_[u];
    const Weight w = sign * h_.edge_weight(e);
    if (count(e, l) == size) neg_[u] += w;
    if (count(e, l) == 1) {
      const BlockId other = labels_[pins[0] != u ? pins[0] : pins[1]];
      if (count(e, other) == size - 1) pos_[static_cast<std::size_t>(u) * k_ + other] += w;
    }
  }

  Weight gain(VertexId v, BlockId t) const { return pos_[static_cast<std::size_t>(v) * k_ + t] - neg_[v]; }

  void push(VertexId v, BlockId t) {
    const std::size_t idx = static_cast<std::size_t>(v) * k_ + t;
    heaps_[static_cast<std::size_t>(labels_[v]) * k_ + t].push({gain(v, t), v, t, ++stamp_[idx]});
  }
  void push_all(VertexId v) {
    for (BlockId t = 0; t < k_; ++t)
      if (t != labels_[v]) push(v, t);
  }

  // Total violation after moving weight w from `from` to `to`.
  Weight violation_after(BlockId from, BlockId to, Weight w) const {
    return violation_ - excess(block_weight_[from]) - excess(block_weight_[to]) +
           excess(block_weight_[from] - w) + excess(block_weight_[to] + w);
  }
  bool legal(Weight after) const { return after < violation_ || after <= slack_; }

  bool stale(const Candidate& c) const {
    return locked_[c.v] || stamp_[static_cast<std::size_t>(c.v) * k_ + c.to] != c.stamp;
  }

  // Best legal candidate over all (source, destination) heaps. While the
  // partition is imbalanced, moves that reduce the violation come first.
  bool select(Candidate& out) {
    constexpr int kMaxSkipped = 64;
    bool found = false, found_repairs = false;
    std::size_t found_heap = 0;
    std::vector<Candidate> skipped;
    for (BlockId a = 0; a < k_; ++a)
      for (BlockId t = 0; t < k_; ++t) {
        if (a == t) continue;
        auto& heap = heaps_[static_cast<std::size_t>(a) * k_ + t];
        skipped.clear();
        while (!heap.empty()) {
          const Candidate c = heap.top();
          if (stale(c)) {
            heap.pop();
            continue;
          }
          const Weight after = violation_after(a, t, h_.vertex_weight(c.v));
          if (legal(after)) {
            const bool repairs = violation_ > 0 && after < violation_;
            if (!found || (repairs && !found_repairs) || (repairs == found_repairs && CandidateOrder{}(out, c))) {
              out = c;
              found = true;
              found_repairs = repairs;
              found_heap = static_cast<std::size_t>(a) * k_ + t;
            }
            break;
          }
          if (static_cast<int>(skipped.size()) == kMaxSkipped) break;
          skipped.push_back(c);
          heap.pop();
        }
        for (const Candidate& c : skipped) heap.push(c);
      }
    if (found) heaps_[found_heap].pop();
    return found;
  }

  void move(VertexId v, BlockId to) {
    const BlockId from = labels_[v];
    const Weight wv = h_.vertex_weight(v);
    const bool in_pass = !locked_.empty();
    if (in_pass) cut_ -= gain(v, to);
    violation_ -= excess(block_weight_[from]) + excess(block_weight_[to]);
    block_weight_[from] -= wv;
    block_weight_[to] += wv;
    violation_ += excess(block_weight_[from]) + excess(block_weight_[to]);

    for (EdgeId e : h_.incident_edges(v)) {
      const int size = static_cast<int>(h_.edge_size(e));
      const bool was_cut = count(e, from) != size;
      // Gains of other pins only change when a count crosses size-1 or size.
      const bool touches = count(e, from) >= size - 1 || count(e, to) + 1 >= size - 1;
      if (touches && in_pass) {
        for (VertexId u : h_.pins(e))
          if (u != v && !locked_[u]) add_contribution(e, u, -1);
      }
      --count(e, from);
      ++count(e, to);
      if (touches && in_pass) {
        labels_[v] = to;
        for (VertexId u : h_.pins(e))
          if (u != v && !locked_[u]) {
            add_contribution(e, u, +1);
            dirty_.push_back(u);
          }
        labels_[v] = from;
      }
      if (!in_pass) {
        const bool now_cut = count(e, to) != size;
        cut_ += (now_cut - was_cut) * h_.edge_weight(e);
      }
    }
    labels_[v] = to;
    if (in_pass) {
      locked_[v] = true;
      std::sort(dirty_.begin(), dirty_.end());
      dirty_.erase(std::unique(dirty_.begin(), dirty_.end()), dirty_.end());
      for (VertexId u : dirty_) push_all(u);
      dirty_.clear();
    }
  }

  void verify() const {
    if (cutsize(h_, Partition(labels_, k_)) != cut_) throw std::logic_error("fm: incremental cutsize mismatch");
  }

 private:
  const Hypergraph& h_;
  BlockId k_;
  BalanceBounds bounds_;
  std::vector<BlockId> labels_;
  std::vector<Weight> block_weight_;
  std::vector<int> pin_count_;
  Weight cut_ = 0;
  Weight violation_ = 0;
  Weight slack_ = 0;  // one vertex in transit between two blocks

  std::vector<bool> locked_;
  std::vector<Weight> pos_;
  std::vector<Weight> neg_;
  std::vector<std::uint32_t> stamp_;
  std::vector<CandidateHeap> heaps_;
  std::vector<VertexId> dirty_;
};

}  // namespace

Partition fm_refine(const Hypergraph& h, const Partition& s, double eps, const FmConfig& cfg) {
  if (s.size() != h.num_vertices()) throw std::invalid_argument("fm_refine: partition size mismatch");
  if (cfg.max_passes < 1) throw std::invalid_argument("fm_refine: max_passes must be >= 1");
  if (s.k < 2 || h.num_vertices() == 0) return s;
  FmState state(h, s, balance_bounds(h.total_vertex_weight(), s.k, eps));
  if (state.violation() > 0 && !cfg.allow_illegal_start) return s;
  for (int p = 0; p < cfg.max_passes; ++p) {
    if (!state.pass(cfg)) break;
  }
  return Partition(state.labels(), s.k);
}

Partition baseline_partitioner(const Hypergraph& h, BlockId k, double eps, int restarts, std::uint64_t seed,
                               const FmConfig& cfg) {
  if (restarts < 1) throw std::invalid_argument("baseline_partitioner: restarts must be >= 1");
  if (k < 1) throw std::invalid_argument("baseline_partitioner: k must be >= 1");
  const VertexId n = h.num_vertices();
  if (k > n) throw InfeasibleError("more blocks than vertices");
  std::mt19937_64 rng(seed);

  auto greedy = [&] {
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexId a, VertexId b) { return h.vertex_weight(a) > h.vertex_weight(b); });
    std::vector<BlockId> labels(n);
    std::vector<Weight> load(k, 0);
    std::vector<BlockId> blocks(k);
    std::iota(blocks.begin(), blocks.end(), 0);
    std::shuffle(blocks.begin(), blocks.end(), rng);
    for (VertexId v : order) {
      const BlockId b = *std::min_element(blocks.begin(), blocks.end(),
                                          [&](BlockId x, BlockId y) { return load[x] < load[y]; });
      labels[v] = b;
      load[b] += h.vertex_weight(v);
    }
    return Partition(std::move(labels), k);
  };

  std::optional<Partition> best;
  std::pair<Weight, Weight> best_key;
  int attempts = 0;
  for (int r = 0; r < restarts; ++r) {
    std::optional<Partition> start;
    while (!start && attempts < 100) {
      ++attempts;
      Partition p = greedy();
      if (!is_balanced(h, p, eps)) p = fm_refine(h, p, eps, cfg);
      if (is_balanced(h, p, eps)) start = std::move(p);
    }
    if (!start) break;
    Partition refined = fm_refine(h, *start, eps, cfg);
    const auto key = std::pair(balance_violation(h, refined, eps), cutsize(h, refined));
    if (!best || key < best_key) {
      best = std::move(refined);
      best_key = key;
    }
  }
  if (!best) throw InfeasibleError("no balanced initial partition found in 100 attempts");
  return *best;
}

}  // namespace ksp
