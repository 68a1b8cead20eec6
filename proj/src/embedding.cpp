#include "kspecpart/embedding.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kspecpart/log.hpp"
#include "kspecpart/parallel.hpp"

namespace ksp {

EmbeddingContext make_embedding_context(const Hypergraph& h, int zeta, std::uint64_t seed) {
  auto shared = std::make_shared<const Hypergraph>(h);
  EmbeddingContext ctx{shared, clique_laplacian(shared), weight_balance_laplacian(h.vertex_weights()),
                       build_sparsifier(h, zeta, seed), {}};
  ctx.precond = h.num_vertices() > 1 ? Preconditioner::build(ctx.sparsifier)
                                     : Preconditioner::identity(h.num_vertices());
  return ctx;
}

Partition one_vs_rest(const Partition& s, BlockId j) {
  if (j < 0 || j >= s.k) throw std::invalid_argument("one_vs_rest: block index out of range");
  std::vector<BlockId> labels(s.labels.size());
  bool any = false;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    labels[v] = s.labels[v] == j ? 0 : 1;
    any |= labels[v] == 0;
  }
  if (!any) throw std::invalid_argument("one_vs_rest: block " + std::to_string(j) + " is empty");
  return Partition(std::move(labels), 2);
}

Embedding two_way_embedding(const EmbeddingContext& ctx, const Partition& hint, int m,
                            const EigenOptions& opts) {
  const Eigen::Index n = ctx.clique.dimension();
  if (m < 1) throw std::invalid_argument("embedding: m must be >= 1");
  Embedding out;
  out.stacked_width = m;
  out.coords = Matrix::Zero(n, m);
  const int solvable = static_cast<int>(std::min<Eigen::Index>(m, n - 1));
  if (solvable < 1) return out;

  const LinearOperator b = ctx.balance + hint_laplacian(hint);
  const EigenResult r = solve_generalized(ctx.clique, b, solvable, ctx.precond, opts);
  out.coords.leftCols(solvable) = r.eigenvectors;
  out.residuals = r.residuals;
  out.converged = r.converged;
  return out;
}

Embedding k_way_embedding(const EmbeddingContext& ctx, const Partition& hint, int m,
                          const EigenOptions& opts, const KWayOptions& kopts) {
  if (hint.k < 2) throw std::invalid_argument("embedding: need k >= 2");
  if (hint.k == 2) return two_way_embedding(ctx, hint, m, opts);

  const BlockId k = hint.k;
  std::vector<Partition> sides;
  sides.reserve(k);
  for (BlockId j = 0; j < k; ++j) sides.push_back(one_vs_rest(hint, j));

  std::vector<Embedding> parts(k);
  parallel_for(static_cast<std::size_t>(k), kopts.threads, [&](std::size_t j) {
    EigenOptions local = opts;
    local.seed = derive_seed(opts.seed, j);
    parts[j] = two_way_embedding(ctx, sides[j], m, local);
  });

  const Eigen::Index n = ctx.clique.dimension();
  Embedding out;
  out.stacked_width = static_cast<Eigen::Index>(k) * m;
  Matrix stacked(n, out.stacked_width);
  for (BlockId j = 0; j < k; ++j) {
    stacked.middleCols(static_cast<Eigen::Index>(j) * m, m) = parts[j].coords;
    out.residuals.insert(out.residuals.end(), parts[j].residuals.begin(), parts[j].residuals.end());
    out.converged &= parts[j].converged;
  }
  out.coords = kopts.use_lda ? lda_reduce(stacked, hint.labels, m) : std::move(stacked);
  return out;
}

Matrix lda_reduce(const Matrix& x, const std::vector<BlockId>& labels, int m) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n) throw std::invalid_argument("lda: label count mismatch");
  if (m < 1 || m > d) throw std::invalid_argument("lda: need 1 <= m <= d");

  std::map<BlockId, std::pair<Vector, Eigen::Index>> classes;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto [it, inserted] = classes.try_emplace(labels[i], Vector::Zero(d), 0);
    it->second.first += x.row(i).transpose();
    ++it->second.second;
  }
  if (classes.size() < 2) throw std::invalid_argument("lda: need at least two classes");
  const Vector mean = x.colwise().mean().transpose();
  for (auto& [label, acc] : classes) acc.first /= static_cast<double>(acc.second);

  Matrix within = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector dev = x.row(i).transpose() - classes.at(labels[i]).first;
    within.noalias() += dev * dev.transpose();
  }
  Matrix between = Matrix::Zero(d, d);
  for (const auto& [label, acc] : classes) {
    const Vector dev = acc.first - mean;
    between.noalias() += static_cast<double>(acc.second) * dev * dev.transpose();
  }

  const double scale = within.trace() + between.trace();
  if (!(scale > 0.0)) {
    log::warn("lda: all points identical; returning leading coordinates");
    return x.leftCols(m);
  }
  double reg = 1e-6 * within.trace() / static_cast<double>(d);
  if (!(reg > 0.0)) reg = 1e-12 * scale / static_cast<double>(d);

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(between, within + reg * Matrix::Identity(d, d));
  if (es.info() != Eigen::Success) throw std::runtime_error("lda: eigen decomposition failed");
  const Vector& evals = es.eigenvalues();  // ascending
  const double top = std::max(evals[d - 1], 0.0);
  const auto rank_limit = static_cast<Eigen::Index>(classes.size()) - 1;

  Matrix proj(d, m);
  Eigen::Index filled = 0;
  for (Eigen::Index j = d - 1; j >= 0 && filled < m && filled < rank_limit; --j) {
    if (evals[j] <= 1e-12 * top || top == 0.0) break;
    proj.col(filled++) = es.eigenvectors().col(j);
  }
  if (filled < m) {
    // Pad with principal directions of the within-class scatter on the
    // orthogonal complement of the discriminant directions.
    Matrix complement = Matrix::Identity(d, d);
    if (filled > 0) {
      Eigen::HouseholderQR<Matrix> qr(proj.leftCols(filled));
      const Matrix q = qr.householderQ() * Matrix::Identity(d, filled);
      complement -= q * q.transpose();
    }
    Matrix residual = complement * within * complement;
    residual = 0.5 * (residual + residual.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> pca(residual);
    for (Eigen::Index j = d - 1; j >= 0 && filled < m; --j) proj.col(filled++) = pca.eigenvectors().col(j);
  }
  return x * proj;
}

void write_embedding_csv(std::ostream& out, const Matrix& coords) {
  out << "vertex";
  for (Eigen::Index j = 0; j < coords.cols(); ++j) out << ",c" << j;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < coords.cols(); ++j) out << ',' << coords(i, j);
    out << '\n';
  }
}

}  // namespace ksp
