#include "kspecpart/driver.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "kspecpart/embedding.hpp"
#include "kspecpart/ensemble.hpp"
#include "kspecpart/log.hpp"
#include "kspecpart/parallel.hpp"
#include "kspecpart/refine.hpp"
#include "kspecpart/treepart.hpp"
#include "kspecpart/trees.hpp"

namespace ksp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::pair<Weight, Weight> key_of(const Hypergraph& h, const Partition& p, double eps) {
  return {balance_violation(h, p, eps), cutsize(h, p)};
}

EnsembleConfig ensemble_config(const KspConfig& cfg, std::uint64_t seed) {
  EnsembleConfig e;
  e.delta = cfg.delta;
  e.gamma = cfg.gamma;
  e.bb.time_limit_seconds = cfg.bb_time_limit;
  e.bb.max_nodes = cfg.bb_max_nodes;
  e.fm.max_passes = cfg.fm_passes;
  e.seed = seed;
  return e;
}

void finish_report(const Hypergraph& h, const Partition& p, const KspConfig& cfg, KspReport& r) {
  r.final_cutsize = cutsize(h, p);
  r.balanced = is_balanced(h, p, cfg.eps);
  r.balance.clear();
  const double total = static_cast<double>(h.total_vertex_weight());
  for (Weight w : block_weights(h, p)) r.balance.push_back(static_cast<double>(w) / total);
}

KspReport blank_report(const Hypergraph& h, const KspConfig& cfg) {
  KspReport r;
  r.vertices = h.num_vertices();
  r.hyperedges = h.num_edges();
  r.k = cfg.k;
  r.eps = cfg.eps;
  r.seed = cfg.seed;
  return r;
}

}  // namespace

void KspConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(k >= 2, "k must be >= 2");
  require(eps >= 0.0, "eps must be >= 0");
  require(m >= 1 && m <= 16, "m must be in [1, 16]");
  require(delta >= 1, "delta must be >= 1");
  require(beta >= 0, "beta must be >= 0");
  require(zeta >= 1, "zeta must be >= 1");
  require(gamma >= 0, "gamma must be >= 0");
  require(eigen_tol > 0.0, "eigen tolerance must be > 0");
  require(eigen_max_iter >= 1, "eigen max iterations must be >= 1");
  require(fm_passes >= 1, "fm passes must be >= 1");
  require(threads >= 0, "threads must be >= 0");
}

Hypergraph bridge_components(const Hypergraph& h, int* added) {
  const auto components = connected_components(h);
  if (added) *added = components.size() > 1 ? static_cast<int>(components.size()) - 1 : 0;
  if (components.size() <= 1) return h;
  auto edges = h.edge_list();
  auto weights = h.edge_weights();
  for (std::size_t c = 1; c < components.size(); ++c) {
    edges.push_back({components[0].front(), components[c].front()});
    weights.push_back(1);
  }
  return Hypergraph(h.vertex_weights(), edges, std::move(weights));
}

KspResult run_kspecpart(const Hypergraph& h, const Partition& s_init, const KspConfig& cfg) {
  cfg.validate();
  if (s_init.size() != h.num_vertices()) throw std::invalid_argument("hint size does not match the hypergraph");
  if (s_init.k != cfg.k) throw std::invalid_argument("hint block count does not match k");
  const auto started = Clock::now();
  const int threads = resolve_threads(cfg.threads);

  KspResult result{s_init, blank_report(h, cfg)};
  KspReport& report = result.report;
  report.initial_cutsize = cutsize(h, s_init);

  FmConfig fm;
  fm.max_passes = cfg.fm_passes;
  std::vector<Partition> candidates{s_init};
  Partition hint = s_init;

  try {
    const Hypergraph bridged = bridge_components(h, &report.bridge_edges);
    if (report.bridge_edges > 0)
      log::info("added " + std::to_string(report.bridge_edges) + " bridge hyperedges for the embedding");
    const EmbeddingContext ctx = make_embedding_context(bridged, cfg.zeta, derive_seed(cfg.seed, 0));
    for (int i = 0; i < cfg.beta; ++i) {
      const auto t0 = Clock::now();
      IterationReport it;
      it.hint_cutsize = cutsize(h, hint);

      EigenOptions eig;
      eig.tol = cfg.eigen_tol;
      eig.max_iter = cfg.eigen_max_iter;
      eig.seed = derive_seed(cfg.seed, 1000 + i);
      KWayOptions kw;
      kw.use_lda = cfg.use_lda;
      kw.threads = threads;
      const Embedding emb = k_way_embedding(ctx, hint, cfg.m, eig, kw);
      it.eigen_residuals = emb.residuals;
      it.eigen_converged = emb.converged;

      const std::vector<Tree> trees = tree_family(ctx.sparsifier, emb.coords, threads);
      const auto tree_solutions = partition_tree_family(h, trees, cfg.k, cfg.eps, fm, threads);
      std::vector<Partition> pool;
      pool.reserve(tree_solutions.size() + 1);
      for (const auto& c : tree_solutions) pool.push_back(c.partition);
      pool.push_back(hint);
      it.n_candidates = pool.size();
      if (!tree_solutions.empty()) {
        const auto best_tree = std::min_element(tree_solutions.begin(), tree_solutions.end(),
                                                [](const ScoredPartition& a, const ScoredPartition& b) {
                                                  return std::pair(a.violation, a.cut) < std::pair(b.violation, b.cut);
                                                });
        it.best_tree_cutsize = best_tree->cut;
      }

      const EnsembleResult ens = ensemble(h, pool, cfg.k, cfg.eps, ensemble_config(cfg, derive_seed(cfg.seed, 2000 + i)));
      it.ensemble_cutsize = ens.cut;
      it.coarse_vertices = ens.coarse_vertices;
      it.coarse_edges = ens.coarse_edges;
      it.proved_optimal = ens.proved_optimal;
      it.seconds = seconds_since(t0);
      report.iterations.push_back(std::move(it));

      candidates.push_back(ens.partition);
      hint = ens.partition;
    }
  } catch (const std::exception& err) {
    report.diagnostic = std::string("supervision loop stopped: ") + err.what();
    log::warn(report.diagnostic);
  }

  Partition best = *std::min_element(candidates.begin(), candidates.end(), [&](const Partition& a, const Partition& b) {
    return key_of(h, a, cfg.eps) < key_of(h, b, cfg.eps);
  });
  try {
    EnsembleConfig final_cfg = ensemble_config(cfg, derive_seed(cfg.seed, 3000));
    final_cfg.export_prefix = cfg.export_coarse_prefix;
    Partition out = fm_refine(h, ensemble(h, candidates, cfg.k, cfg.eps, final_cfg).partition, cfg.eps, fm);
    if (key_of(h, out, cfg.eps) <= key_of(h, best, cfg.eps)) best = std::move(out);
  } catch (const std::exception& err) {
    report.diagnostic += (report.diagnostic.empty() ? "" : "; ") + std::string("final ensemble failed: ") + err.what();
    log::warn(report.diagnostic);
  }

  result.partition = std::move(best);
  finish_report(h, result.partition, cfg, report);
  report.seconds = seconds_since(started);
  return result;
}

KspResult run_overlay_only(const Hypergraph& h, const std::vector<Partition>& pool, const KspConfig& cfg) {
  cfg.validate();
  if (pool.empty()) throw std::invalid_argument("overlay needs at least one solution");
  const auto started = Clock::now();
  KspResult result{pool.front(), blank_report(h, cfg)};
  Weight best_input = cutsize(h, pool.front());
  for (const Partition& p : pool) best_input = std::min(best_input, cutsize(h, p));
  result.report.initial_cutsize = best_input;
  EnsembleConfig ecfg = ensemble_config(cfg, derive_seed(cfg.seed, 3000));
  ecfg.export_prefix = cfg.export_coarse_prefix;
  result.partition = ensemble(h, pool, cfg.k, cfg.eps, ecfg).partition;
  finish_report(h, result.partition, cfg, result.report);
  result.report.seconds = seconds_since(started);
  return result;
}

}  // namespace ksp
