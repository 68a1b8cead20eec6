#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "kspecpart/bench.hpp"
#include "kspecpart/distill.hpp"
#include "kspecpart/driver.hpp"
#include "kspecpart/embedding.hpp"
#include "kspecpart/errors.hpp"
#include "kspecpart/io.hpp"
#include "kspecpart/log.hpp"
#include "kspecpart/parallel.hpp"
#include "kspecpart/refine.hpp"
#include "kspecpart/trees.hpp"

namespace {

using namespace ksp;

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kInfeasible = 3 };

struct Common {
  std::string hgr;
  KspConfig cfg;
  bool no_lda = false;
  bool no_timings = false;
  std::string out;
  std::string report;
};

void add_problem(CLI::App* cmd, Common& c, bool need_hgr = true) {
  auto* opt = cmd->add_option("--hgr", c.hgr, "hMETIS hypergraph file");
  if (need_hgr) opt->required();
  cmd->add_option("--k", c.cfg.k, "number of blocks")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--eps", c.cfg.eps, "imbalance as a fraction")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", c.cfg.seed, "random seed");
}

void add_tuning(CLI::App* cmd, Common& c) {
  cmd->add_option("--m", c.cfg.m, "eigenvectors per embedding");
  cmd->add_option("--delta", c.cfg.delta, "solutions overlaid per ensemble");
  cmd->add_option("--beta", c.cfg.beta, "supervision iterations");
  cmd->add_option("--zeta", c.cfg.zeta, "random cycles per hyperedge");
  cmd->add_option("--gamma", c.cfg.gamma, "largest clustered instance solved exactly");
  cmd->add_option("--eigen-tol", c.cfg.eigen_tol, "eigensolver residual tolerance");
  cmd->add_option("--eigen-max-iter", c.cfg.eigen_max_iter, "eigensolver iteration cap");
  cmd->add_option("--fm-passes", c.cfg.fm_passes, "FM passes per refinement");
  cmd->add_option("--bb-time-limit", c.cfg.bb_time_limit, "branch and bound time limit in seconds");
  cmd->add_option("--bb-max-nodes", c.cfg.bb_max_nodes, "branch and bound node budget (0 = none)");
  cmd->add_flag("--no-lda", c.no_lda, "use the stacked one-vs-rest embedding without LDA");
  cmd->add_option("--threads", c.cfg.threads, "worker threads (0 = KSPECPART_THREADS or all cores)");
  cmd->add_flag("--no-timings", c.no_timings, "write 0 for every timing in reports");
  cmd->add_option("--export-coarse", c.cfg.export_coarse_prefix, "write <prefix>.hgr and <prefix>.lp of the final clustered instance");
}

void emit_solution(const Partition& p, const std::string& out) {
  if (out.empty() || out == "-")
    write_solution(std::cout, p);
  else
    write_solution_file(out, p);
}

void emit_report(const KspReport& r, const Common& c) {
  if (c.report.empty()) return;
  const std::string text = report_json(r, !c.no_timings);
  if (c.report == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.report);
  if (!f || !(f << text)) throw IoError("cannot write report " + c.report);
}

void print_summary(const Hypergraph& h, const Partition& p, double eps) {
  std::cout << "cutsize " << cutsize(h, p) << "\n";
  std::cout << "balanced " << (is_balanced(h, p, eps) ? "yes" : "no") << "\n";
  const auto w = block_weights(h, p);
  std::cout << "blocks";
  for (Weight b : w)
    std::cout << ' ' << std::fixed << std::setprecision(6)
              << static_cast<double>(b) / static_cast<double>(h.total_vertex_weight());
  std::cout << "\n";
}

Partition make_hint(const Hypergraph& h, const KspConfig& cfg, int restarts) {
  FmConfig fm;
  fm.max_passes = cfg.fm_passes;
  return baseline_partitioner(h, cfg.k, cfg.eps, restarts, cfg.seed, fm);
}

int run(int argc, char** argv) {
  CLI::App app{"K-way spectral hypergraph partitioner"};
  app.require_subcommand(1);
  int verbosity = 0;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbosity, "more logging (repeatable)");
  app.add_flag("-q,--quiet", quiet, "errors only");

  Common c;
  std::string hint_path;
  std::vector<std::string> sols;
  int restarts = 5;
  int brute_max_vertices = 16;
  int tree_index = -1;
  std::string manifest, cache_dir = "bench_cache";
  bool parallel = false;

  auto* partition = app.add_subcommand("partition", "full supervised spectral pipeline");
  add_problem(partition, c);
  add_tuning(partition, c);
  partition->add_option("--hint", hint_path, "hint solution (default: generated)");
  partition->add_option("--out", c.out, "solution file (default: stdout)");
  partition->add_option("--report", c.report, "JSON report file");

  auto* overlay = app.add_subcommand("overlay", "ensemble externally supplied solutions");
  add_problem(overlay, c);
  add_tuning(overlay, c);
  overlay->add_option("--sol", sols, "solution file (repeatable)")->required();
  overlay->add_option("--out", c.out, "solution file (default: stdout)");
  overlay->add_option("--report", c.report, "JSON report file");

  auto* evaluate = app.add_subcommand("evaluate", "cutsize and balance of a solution");
  add_problem(evaluate, c);
  evaluate->add_option("--sol", hint_path, "solution file")->required();

  auto* brute = app.add_subcommand("brute", "exhaustive optimum for tiny instances");
  add_problem(brute, c);
  brute->add_option("--max-vertices", brute_max_vertices, "refuse larger inputs");
  brute->add_option("--out", c.out, "solution file (default: stdout)");

  auto* debug = app.add_subcommand("distill-debug", "distilled tree edge weights for one hint");
  add_problem(debug, c);
  add_tuning(debug, c);
  debug->add_option("--hint", hint_path, "hint solution (default: generated)");
  debug->add_option("--tree", tree_index, "only this tree of the family");

  auto* hint = app.add_subcommand("hint", "greedy plus FM baseline partition");
  add_problem(hint, c);
  hint->add_option("--restarts", restarts, "independent restarts")->check(CLI::PositiveNumber);
  hint->add_option("--fm-passes", c.cfg.fm_passes, "FM passes per refinement");
  hint->add_option("--out", c.out, "solution file (default: stdout)");

  Common bc;
  auto* bench = app.add_subcommand("bench", "run a benchmark manifest");
  add_problem(bench, bc, false);
  add_tuning(bench, bc);
  bench->add_option("--manifest", manifest, "manifest file")->required();
  bench->add_option("--out", bc.out, "CSV file (default: stdout)");
  bench->add_option("--cache-dir", cache_dir, "download directory");
  bench->add_flag("--parallel", parallel, "run instances concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  log::set_level(quiet ? log::Level::kQuiet : verbosity >= 2 ? log::Level::kDebug
                                            : verbosity == 1 ? log::Level::kInfo
                                                             : log::Level::kWarn);
  c.cfg.use_lda = !c.no_lda;
  bc.cfg.use_lda = !bc.no_lda;

  if (*bench) {
    bench::BenchOptions opts;
    opts.base = bc.cfg;
    opts.cache_dir = cache_dir;
    opts.parallel = parallel;
    opts.include_timings = !bc.no_timings;
    opts.base.validate();
    const auto entries = bench::read_manifest_file(manifest);
    const auto base_dir = std::filesystem::path(manifest).parent_path().string();
    const auto rows = bench::run_suite(entries, opts, base_dir.empty() ? "." : base_dir);
    if (bc.out.empty() || bc.out == "-") {
      bench::write_csv(std::cout, rows, opts.include_timings);
    } else {
      std::ofstream f(bc.out);
      if (!f) throw IoError("cannot write " + bc.out);
      bench::write_csv(f, rows, opts.include_timings);
    }
    return kOk;
  }

  const Hypergraph h = read_hmetis_file(c.hgr);
  c.cfg.validate();

  if (*evaluate) {
    const Partition p = read_solution_file(hint_path, h.num_vertices(), c.cfg.k);
    print_summary(h, p, c.cfg.eps);
    return kOk;
  }
  if (*hint) {
    const Partition p = make_hint(h, c.cfg, restarts);
    emit_solution(p, c.out);
    if (!c.out.empty() && c.out != "-") print_summary(h, p, c.cfg.eps);
    return kOk;
  }
  if (*brute) {
    if (h.num_vertices() > brute_max_vertices) {
      std::cerr << "brute: " << h.num_vertices() << " vertices exceeds --max-vertices " << brute_max_vertices << "\n";
      return kUsage;
    }
    const Partition p = brute_force_optimal(h, c.cfg.k, c.cfg.eps);
    emit_solution(p, c.out);
    if (!c.out.empty() && c.out != "-") print_summary(h, p, c.cfg.eps);
    return kOk;
  }
  if (*overlay) {
    std::vector<Partition> pool;
    for (const auto& s : sols) pool.push_back(read_solution_file(s, h.num_vertices(), c.cfg.k));
    const KspResult r = run_overlay_only(h, pool, c.cfg);
    emit_solution(r.partition, c.out);
    emit_report(r.report, c);
    return kOk;
  }

  const Partition s_init =
      hint_path.empty() ? make_hint(h, c.cfg, restarts) : read_solution_file(hint_path, h.num_vertices(), c.cfg.k);

  if (*debug) {
    const Hypergraph bridged = bridge_components(h);
    const EmbeddingContext ctx = make_embedding_context(bridged, c.cfg.zeta, derive_seed(c.cfg.seed, 0));
    EigenOptions eig;
    eig.tol = c.cfg.eigen_tol;
    eig.max_iter = c.cfg.eigen_max_iter;
    eig.seed = derive_seed(c.cfg.seed, 1000);
    KWayOptions kw;
    kw.use_lda = c.cfg.use_lda;
    kw.threads = resolve_threads(c.cfg.threads);
    const Embedding emb = k_way_embedding(ctx, s_init, c.cfg.m, eig, kw);
    const auto trees = tree_family(ctx.sparsifier, emb.coords, kw.threads);
    std::cout << "# tree edge u v cut below_weight\n";
    for (std::size_t t = 0; t < trees.size(); ++t) {
      if (tree_index >= 0 && static_cast<std::size_t>(tree_index) != t) continue;
      const DistilledTree d = distill(h, trees[t]);
      for (std::size_t e = 0; e < d.tree.edges.size(); ++e)
        std::cout << t << ' ' << e << ' ' << d.tree.edges[e].first << ' ' << d.tree.edges[e].second << ' '
                  << d.edge_cut_weight[e] << ' ' << d.subtree_vertex_weight[e] << '\n';
    }
    return kOk;
  }

  const KspResult r = run_kspecpart(h, s_init, c.cfg);
  emit_solution(r.partition, c.out);
  emit_report(r.report, c);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ksp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kIo;
  } catch (const ksp::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const ksp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
