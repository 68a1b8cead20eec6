#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kspecpart/embedding.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace ksp {
namespace {

using testing::dense_clique_laplacian;
using testing::dense_generalized_eigenvectors;
using testing::dense_hint_laplacian;
using testing::dense_weight_balance_laplacian;

// `count` cliques of `size` vertices (2-pin edges), chained by bridge edges
// between consecutive clique representatives.
Hypergraph bridged_cliques(int count, int size) {
  std::vector<std::vector<VertexId>> edges;
  for (int c = 0; c < count; ++c) {
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) edges.push_back({c * size + i, c * size + j});
    if (c > 0) edges.push_back({(c - 1) * size, c * size});
  }
  return Hypergraph::unit(count * size, edges);
}

std::vector<BlockId> clique_labels(int count, int size) {
  std::vector<BlockId> labels(count * size);
  for (int v = 0; v < count * size; ++v) labels[v] = v / size;
  return labels;
}

Eigen::MatrixXd dense_pencil_b(const Hypergraph& h, const std::vector<BlockId>& two_way) {
  return dense_weight_balance_laplacian(h.vertex_weights()) + dense_hint_laplacian(two_way);
}

TEST(OneVsRest, Examples) {
  const Partition s({0, 1, 2, 0}, 3);
  EXPECT_EQ(one_vs_rest(s, 1).labels, (std::vector<BlockId>{1, 0, 1, 1}));
  EXPECT_EQ(one_vs_rest(s, 2).labels, (std::vector<BlockId>{1, 1, 0, 1}));
  const Partition two({0, 1, 1, 0}, 2);
  EXPECT_EQ(one_vs_rest(two, 0).labels, (std::vector<BlockId>{0, 1, 1, 0}));
  EXPECT_EQ(one_vs_rest(two, 1).labels, (std::vector<BlockId>{1, 0, 0, 1}));
  EXPECT_THROW(one_vs_rest(Partition({0, 0, 2}, 3), 1), std::invalid_argument);
}

TEST(TwoWayEmbedding, H0SignSeparatesHint) {
  const Hypergraph h = testing::h0();
  const Partition hint({0, 1, 1, 0}, 2);
  const auto ctx = make_embedding_context(h, 2, 7);
  const Embedding e = two_way_embedding(ctx, hint, 1, {});
  ASSERT_EQ(e.coords.cols(), 1);
  const auto x = e.coords.col(0);
  EXPECT_GT(x[0] * x[3], 0.0);
  EXPECT_GT(x[1] * x[2], 0.0);
  EXPECT_LT(x[0] * x[1], 0.0);

  const Eigen::MatrixXd ref = dense_generalized_eigenvectors(dense_clique_laplacian(h), dense_pencil_b(h, hint.labels));
  const double cosine = std::abs(ref.col(0).normalized().dot(x.normalized()));
  EXPECT_NEAR(cosine, 1.0, 1e-8);
}

TEST(TwoWayEmbedding, ColumnsAreBOrthonormal) {
  std::mt19937_64 rng(11);
  testing::RandomHypergraphSpec spec;
  spec.min_vertices = 30;
  spec.connected = true;
  const Hypergraph h = testing::random_hypergraph(spec, rng);
  const Partition hint = testing::random_partition(h.num_vertices(), 2, rng);
  const auto ctx = make_embedding_context(h, 2, 3);
  EigenOptions opts;
  opts.dense_factor = 0;
  const Embedding e = two_way_embedding(ctx, hint, 2, opts);
  ASSERT_EQ(e.coords.cols(), 2);
  const Eigen::MatrixXd gram = e.coords.transpose() * dense_pencil_b(h, hint.labels) * e.coords;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-6);
}

TEST(TwoWayEmbedding, BridgedCliquesSeparate) {
  const Hypergraph h = bridged_cliques(2, 20);
  const Partition hint(clique_labels(2, 20), 2);
  const auto ctx = make_embedding_context(h, 2, 5);
  EigenOptions opts;
  opts.dense_factor = 0;
  const Embedding e = two_way_embedding(ctx, hint, 1, opts);
  EXPECT_TRUE(e.converged);
  const auto x = e.coords.col(0);
  for (VertexId v = 0; v < 40; ++v) EXPECT_GT(x[v] * x[0] * (hint[v] == hint[0] ? 1 : -1), 0.0) << v;

  const Eigen::MatrixXd ref = dense_generalized_eigenvectors(dense_clique_laplacian(h), dense_pencil_b(h, hint.labels));
  EXPECT_NEAR(std::abs(ref.col(0).normalized().dot(x.normalized())), 1.0, 1e-6);
}

TEST(TwoWayEmbedding, PadsWhenGraphIsTooSmall) {
  const Hypergraph h = Hypergraph::unit(2, {{0, 1}});
  const auto ctx = make_embedding_context(h, 2, 1);
  const Embedding e = two_way_embedding(ctx, Partition({0, 1}, 2), 3, {});
  ASSERT_EQ(e.coords.cols(), 3);
  EXPECT_NE(e.coords.col(0).norm(), 0.0);
  EXPECT_EQ(e.coords.col(1).norm(), 0.0);
  EXPECT_EQ(e.coords.col(2).norm(), 0.0);
}

TEST(KWayEmbedding, TwoWayBranchIsIdentical) {
  const Hypergraph h = bridged_cliques(2, 8);
  const Partition hint(clique_labels(2, 8), 2);
  const auto ctx = make_embedding_context(h, 2, 5);
  const Embedding a = two_way_embedding(ctx, hint, 2, {});
  const Embedding b = k_way_embedding(ctx, hint, 2, {});
  EXPECT_EQ(a.coords, b.coords);
}

TEST(KWayEmbedding, Widths) {
  std::mt19937_64 rng(2);
  testing::RandomHypergraphSpec spec;
  spec.min_vertices = 30;
  spec.connected = true;
  const Hypergraph h = testing::random_hypergraph(spec, rng);
  const Partition hint = testing::random_partition(h.num_vertices(), 3, rng);
  const auto ctx = make_embedding_context(h, 2, 9);
  const Embedding reduced = k_way_embedding(ctx, hint, 2, {});
  EXPECT_EQ(reduced.stacked_width, 6);
  EXPECT_EQ(reduced.coords.cols(), 2);
  EXPECT_EQ(reduced.coords.rows(), h.num_vertices());
  KWayOptions raw;
  raw.use_lda = false;
  const Embedding stacked = k_way_embedding(ctx, hint, 2, {}, raw);
  EXPECT_EQ(stacked.coords.cols(), 6);
  EXPECT_EQ(stacked.residuals.size(), 6u);
}

// Pairwise centroid distances must exceed every group's radius.
void expect_separated_groups(const Eigen::MatrixXd& y, const std::vector<BlockId>& labels, BlockId k) {
  Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(k, y.cols());
  std::vector<double> count(k, 0.0), radius(k, 0.0);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    centroid.row(labels[i]) += y.row(i);
    count[labels[i]] += 1;
  }
  for (BlockId c = 0; c < k; ++c) centroid.row(c) /= count[c];
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    radius[labels[i]] = std::max(radius[labels[i]], (y.row(i) - centroid.row(labels[i])).norm());
  const double max_radius = *std::max_element(radius.begin(), radius.end());
  for (BlockId a = 0; a < k; ++a)
    for (BlockId b = a + 1; b < k; ++b)
      EXPECT_GT((centroid.row(a) - centroid.row(b)).norm(), max_radius) << a << "," << b;
}

TEST(KWayEmbedding, FourCliquesFormFourGroups) {
  const int k = 4, size = 10;
  const Hypergraph h = bridged_cliques(k, size);
  const Partition hint(clique_labels(k, size), k);
  const auto ctx = make_embedding_context(h, 2, 13);
  EigenOptions opts;
  opts.dense_factor = 0;
  const Embedding e = k_way_embedding(ctx, hint, 2, opts);
  ASSERT_EQ(e.coords.cols(), 2);
  expect_separated_groups(e.coords, hint.labels, k);

  // Same pipeline with dense eigenvectors and textbook LDA.
  const Eigen::MatrixXd lg = dense_clique_laplacian(h);
  Eigen::MatrixXd stacked(h.num_vertices(), 2 * k);
  for (BlockId j = 0; j < k; ++j) {
    std::vector<BlockId> side(h.num_vertices());
    for (VertexId v = 0; v < h.num_vertices(); ++v) side[v] = hint[v] == j ? 0 : 1;
    stacked.middleCols(2 * j, 2) = dense_generalized_eigenvectors(lg, dense_pencil_b(h, side)).leftCols(2);
  }
  expect_separated_groups(testing::oracle_lda(stacked, hint.labels, 2), hint.labels, k);
}

TEST(KWayEmbedding, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(4);
  testing::RandomHypergraphSpec spec;
  spec.min_vertices = 35;
  spec.connected = true;
  const Hypergraph h = testing::random_hypergraph(spec, rng);
  const Partition hint = testing::random_partition(h.num_vertices(), 4, rng);
  const auto ctx = make_embedding_context(h, 2, 21);
  KWayOptions one, many;
  many.threads = 3;
  const Embedding a = k_way_embedding(ctx, hint, 2, {}, one);
  const Embedding b = k_way_embedding(ctx, hint, 2, {}, many);
  const Embedding c = k_way_embedding(make_embedding_context(h, 2, 21), hint, 2, {}, one);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_EQ(a.coords, c.coords);
}

TEST(KWayEmbedding, EmptyHintBlockIsAnError) {
  const Hypergraph h = bridged_cliques(3, 5);
  const auto ctx = make_embedding_context(h, 2, 1);
  std::vector<BlockId> labels(15, 0);
  labels[14] = 2;
  EXPECT_THROW(k_way_embedding(ctx, Partition(labels, 3), 2, {}), std::invalid_argument);
}

// Two classes centred at (0,0) and (10,0); noise offsets are symmetric so the
// within-class scatter is diagonal.
Eigen::MatrixXd two_blobs(std::vector<BlockId>& labels) {
  const std::vector<std::pair<double, double>> offsets = {
      {0.01, 0.02}, {-0.01, 0.02}, {0.01, -0.02}, {-0.01, -0.02}, {0.03, 0.0}, {-0.03, 0.0}, {0.0, 0.015}, {0.0, -0.015}};
  Eigen::MatrixXd x(2 * offsets.size(), 2);
  labels.clear();
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      x.row(c * offsets.size() + i) << 10.0 * c + offsets[i].first, offsets[i].second;
      labels.push_back(c);
    }
  return x;
}

TEST(Lda, TwoClassDirectionMatchesClosedForm) {
  std::vector<BlockId> labels;
  const Eigen::MatrixXd x = two_blobs(labels);
  const Eigen::MatrixXd y = lda_reduce(x, labels, 1);
  ASSERT_EQ(y.cols(), 1);
  // Recover the projection direction by least squares.
  const Eigen::Vector2d p = x.colPivHouseholderQr().solve(y);
  const double angle = std::atan2(std::abs(p[1]), std::abs(p[0]));
  EXPECT_LT(angle, 1e-3);

  Eigen::Matrix2d sw = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mu[2] = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  for (Eigen::Index i = 0; i < x.rows(); ++i) mu[labels[i]] += x.row(i).transpose() / 8.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::Vector2d d = x.row(i).transpose() - mu[labels[i]];
    sw += d * d.transpose();
  }
  const Eigen::Vector2d closed = sw.inverse() * (mu[1] - mu[0]);
  EXPECT_NEAR(std::abs(closed.normalized().dot(p.normalized())), 1.0, 1e-9);
}

TEST(Lda, RejectsSingleClassAndOversizedTarget) {
  std::vector<BlockId> labels;
  const Eigen::MatrixXd x = two_blobs(labels);
  EXPECT_THROW(lda_reduce(x, std::vector<BlockId>(x.rows(), 0), 1), std::invalid_argument);
  EXPECT_THROW(lda_reduce(x, labels, 3), std::invalid_argument);
}

TEST(Lda, SeparatedInputKeepsFullRank) {
  std::vector<BlockId> labels;
  const Eigen::MatrixXd x = two_blobs(labels);
  const Eigen::MatrixXd y = lda_reduce(x, labels, 2);  // m > K - 1: padded
  ASSERT_EQ(y.cols(), 2);
  Eigen::MatrixXd centered = y.rowwise() - y.colwise().mean();
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(centered).rank(), 2);
}

TEST(Lda, TranslationOnlyShiftsOutput) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise;
  Eigen::MatrixXd x(60, 5);
  std::vector<BlockId> labels(60);
  for (int i = 0; i < 60; ++i) {
    labels[i] = i % 3;
    for (int j = 0; j < 5; ++j) x(i, j) = noise(rng) + 3.0 * labels[i] * (j == labels[i]);
  }
  Eigen::RowVectorXd shift(5);
  shift << 4, -2, 7, 0.5, 1;
  const Eigen::MatrixXd y = lda_reduce(x, labels, 2);
  const Eigen::MatrixXd y_shifted = lda_reduce(x.rowwise() + shift, labels, 2);
  const Eigen::MatrixXd diff = y_shifted - y;
  for (Eigen::Index i = 1; i < diff.rows(); ++i) EXPECT_LT((diff.row(i) - diff.row(0)).norm(), 1e-8);
}

TEST(Lda, IdenticalPointsPassThrough) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(6, 3, 2.5);
  const Eigen::MatrixXd y = lda_reduce(x, {0, 0, 1, 1, 2, 2}, 2);
  EXPECT_EQ(y, x.leftCols(2));
}

TEST(EmbeddingCsv, Format) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0.5, -2, 3;
  std::ostringstream out;
  write_embedding_csv(out, x);
  EXPECT_EQ(out.str(), "vertex,c0,c1\n0,1,0.5\n1,-2,3\n");
}

}  // namespace
}  // namespace ksp
