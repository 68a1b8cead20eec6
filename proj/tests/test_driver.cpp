#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "kspecpart/driver.hpp"
#include "kspecpart/errors.hpp"
#include "kspecpart/refine.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace ksp {
namespace {

KspConfig config(BlockId k, double eps) {
  KspConfig cfg;
  cfg.k = k;
  cfg.eps = eps;
  cfg.threads = 1;
  return cfg;
}

TEST(Driver, RunningExampleReachesOptimum) {
  const Hypergraph h = testing::h0();
  const KspResult r = run_kspecpart(h, Partition({0, 0, 1, 1}, 2), config(2, 0.25));
  EXPECT_EQ(testing::oracle_cutsize(h, r.partition.labels), 2);
  EXPECT_EQ(testing::oracle_optimal_cut(h, 2, 0.25), 2);
  EXPECT_EQ(r.report.final_cutsize, 2);
  EXPECT_EQ(r.report.initial_cutsize, 3);
  EXPECT_EQ(r.report.iterations.size(), 2u);
  EXPECT_TRUE(r.report.balanced);
}

TEST(Driver, ZeroIterationsIsRefinedHint) {
  std::mt19937_64 rng(11);
  testing::RandomHypergraphSpec spec;
  spec.min_vertices = 20;
  spec.max_vertices = 40;
  spec.connected = true;
  for (int t = 0; t < 10; ++t) {
    const Hypergraph h = testing::random_hypergraph(spec, rng);
    const Partition hint = baseline_partitioner(h, 2, 0.1, 1, t);
    KspConfig cfg = config(2, 0.1);
    cfg.beta = 0;
    const KspResult r = run_kspecpart(h, hint, cfg);
    EXPECT_TRUE(r.report.iterations.empty());
    EXPECT_LE(r.report.final_cutsize, cutsize(h, fm_refine(h, hint, 0.1)));
    EXPECT_TRUE(is_balanced(h, r.partition, 0.1));
  }
}

TEST(Driver, NeverWorseThanHint) {
  std::mt19937_64 rng(12);
  testing::RandomHypergraphSpec spec;
  spec.min_vertices = 10;
  spec.max_vertices = 50;
  spec.max_vertex_weight = 3;
  spec.max_edge_weight = 4;
  for (int t = 0; t < 20; ++t) {
    const Hypergraph h = testing::random_hypergraph(spec, rng);
    const BlockId k = 2 + t % 3;
    const double eps = t % 2 ? 0.1 : 0.05;
    const Partition hint = baseline_partitioner(h, k, eps, 1, t);
    const KspResult r = run_kspecpart(h, hint, config(k, eps));
    if (is_balanced(h, hint, eps)) {
      EXPECT_LE(testing::oracle_cutsize(h, r.partition.labels), testing::oracle_cutsize(h, hint.labels));
      EXPECT_TRUE(testing::oracle_balanced(h, r.partition.labels, k, eps));
    }
    EXPECT_EQ(r.report.final_cutsize, testing::oracle_cutsize(h, r.partition.labels));
    Weight best = r.report.initial_cutsize;
    for (const auto& it : r.report.iterations) {
      EXPECT_LE(it.ensemble_cutsize, it.hint_cutsize);
      best = std::min(best, it.ensemble_cutsize);
    }
    EXPECT_LE(r.report.final_cutsize, best);
  }
}

TEST(Driver, BridgesDisconnectedInputs) {
  // Three components, one of them an isolated vertex.
  const Hypergraph h = Hypergraph::unit(9, {{0, 1, 2}, {1, 2}, {3, 4, 5}, {4, 5, 6}, {3, 6}});
  int added = -1;
  const Hypergraph b = bridge_components(h, &added);
  EXPECT_EQ(added, 3);
  EXPECT_EQ(b.num_edges(), h.num_edges() + 3);
  EXPECT_EQ(connected_components(b).size(), 1u);
  const KspResult r = run_kspecpart(h, baseline_partitioner(h, 2, 0.2, 2, 1), config(2, 0.2));
  EXPECT_EQ(r.report.bridge_edges, 3);
  EXPECT_EQ(r.report.final_cutsize, testing::oracle_cutsize(h, r.partition.labels));
  EXPECT_EQ(r.report.final_cutsize, testing::oracle_optimal_cut(h, 2, 0.2));

  int none = -1;
  EXPECT_EQ(bridge_components(testing::h0(), &none).num_edges(), 3);
  EXPECT_EQ(none, 0);
}

TEST(Driver, Deterministic) {
  std::mt19937_64 rng(13);
  testing::RandomHypergraphSpec spec;
  spec.min_vertices = 40;
  spec.max_vertices = 60;
  const Hypergraph h = testing::random_hypergraph(spec, rng);
  const Partition hint = baseline_partitioner(h, 3, 0.05, 1, 3);
  KspConfig one = config(3, 0.05);
  KspConfig many = one;
  many.threads = 4;
  const KspResult a = run_kspecpart(h, hint, one);
  const KspResult b = run_kspecpart(h, hint, one);
  const KspResult c = run_kspecpart(h, hint, many);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.partition, c.partition);
  EXPECT_EQ(report_json(a.report, false), report_json(b.report, false));
  EXPECT_EQ(report_json(a.report, false), report_json(c.report, false));
}

TEST(Driver, RejectsBadInput) {
  const Hypergraph h = testing::h0();
  KspConfig bad = config(2, 0.25);
  bad.delta = 0;
  EXPECT_THROW(run_kspecpart(h, Partition({0, 0, 1, 1}, 2), bad), std::invalid_argument);
  bad = config(2, -0.1);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = config(1, 0.1);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(run_kspecpart(h, Partition({0, 1, 1}, 2), config(2, 0.25)), std::invalid_argument);
  EXPECT_THROW(run_kspecpart(h, Partition({0, 1, 2, 1}, 3), config(2, 0.25)), std::invalid_argument);
}

TEST(Overlay, SingleSolutionNotWorse) {
  std::mt19937_64 rng(14);
  testing::RandomHypergraphSpec spec;
  for (int t = 0; t < 10; ++t) {
    const Hypergraph h = testing::random_hypergraph(spec, rng);
    const Partition s = baseline_partitioner(h, 2, 0.1, 1, t);
    const KspResult r = run_overlay_only(h, {s}, config(2, 0.1));
    if (is_balanced(h, s, 0.1)) EXPECT_LE(cutsize(h, r.partition), cutsize(h, s));
  }
}

TEST(Overlay, RunningExamplePool) {
  const Hypergraph h = testing::h0();
  std::vector<Partition> pool;
  for (std::vector<BlockId> l : {std::vector<BlockId>{0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 1, 1}})
    pool.emplace_back(l, 2);
  const KspResult r = run_overlay_only(h, pool, config(2, 0.25));
  EXPECT_EQ(testing::oracle_cutsize(h, r.partition.labels), testing::oracle_optimal_cut(h, 2, 0.25));
  EXPECT_EQ(r.report.final_cutsize, 2);
  EXPECT_THROW(run_overlay_only(h, {}, config(2, 0.25)), std::invalid_argument);
}

TEST(Report, Schema) {
  const Hypergraph h = testing::h0();
  const KspResult r = run_kspecpart(h, Partition({0, 0, 1, 1}, 2), config(2, 0.25));
  const auto doc = nlohmann::json::parse(report_json(r.report));
  EXPECT_EQ(doc["input"]["vertices"], 4);
  EXPECT_EQ(doc["input"]["hyperedges"], 3);
  EXPECT_EQ(doc["input"]["k"], 2);
  EXPECT_DOUBLE_EQ(doc["input"]["eps"].get<double>(), 0.25);
  ASSERT_EQ(doc["iterations"].size(), 2u);
  for (const auto& it : doc["iterations"]) {
    for (const char* key : {"hint_cutsize", "eigen_residuals", "n_candidates", "ensemble_cutsize", "seconds"})
      EXPECT_TRUE(it.contains(key)) << key;
    EXPECT_EQ(it["eigen_residuals"].size(), 2u);
  }
  EXPECT_EQ(doc["final"]["cutsize"], 2);
  EXPECT_EQ(doc["final"]["seed"], 1);
  ASSERT_EQ(doc["final"]["balance"].size(), 2u);
  EXPECT_DOUBLE_EQ(doc["final"]["balance"][0].get<double>() + doc["final"]["balance"][1].get<double>(), 1.0);

  const auto quiet = nlohmann::json::parse(report_json(r.report, false));
  EXPECT_EQ(quiet["final"]["seconds"], 0.0);
  EXPECT_EQ(quiet["iterations"][0]["seconds"], 0.0);
}

}  // namespace
}  // namespace ksp
