#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "kspecpart/eigensolver.hpp"

namespace ksp {

// Graph level in CSR form (merged parallel edges, no self-loops) plus the
// aggregation map to the next coarser level.
struct Preconditioner::Level {
  VertexId n = 0;
  std::vector<std::size_t> rowptr;
  std::vector<VertexId> col;
  std::vector<double> val;
  Vector degree;
  std::vector<VertexId> aggregate;
  VertexId n_coarse = 0;

  Vector laplacian(const Vector& x) const {
    Vector y = degree.cwiseProduct(x);
    for (VertexId i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t p = rowptr[i]; p < rowptr[i + 1]; ++p) s += val[p] * x[col[p]];
      y[i] -= s;
    }
    return y;
  }
};

namespace {

constexpr double kOmega = 2.0 / 3.0;
constexpr int kSweeps = 2;

using Level = Preconditioner::Level;

Level make_level(VertexId n, std::vector<std::tuple<VertexId, VertexId, double>> edges) {
  for (auto& [u, v, w] : edges) {
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::vector<std::tuple<VertexId, VertexId, double>> merged;
  for (const auto& e : edges) {
    if (std::get<0>(e) == std::get<1>(e)) continue;
    if (!merged.empty() && std::get<0>(merged.back()) == std::get<0>(e) &&
        std::get<1>(merged.back()) == std::get<1>(e)) {
      std::get<2>(merged.back()) += std::get<2>(e);
    } else {
      merged.push_back(e);
    }
  }
  Level level;
  level.n = n;
  level.degree = Vector::Zero(n);
  std::vector<std::size_t> count(n + 1, 0);
  for (const auto& [u, v, w] : merged) {
    ++count[u + 1];
    ++count[v + 1];
  }
  level.rowptr.assign(n + 1, 0);
  std::partial_sum(count.begin(), count.end(), level.rowptr.begin());
  level.col.resize(level.rowptr[n]);
  level.val.resize(level.rowptr[n]);
  std::vector<std::size_t> fill(level.rowptr.begin(), level.rowptr.end() - 1);
  for (const auto& [u, v, w] : merged) {
    level.col[fill[u]] = v;
    level.val[fill[u]++] = w;
    level.col[fill[v]] = u;
    level.val[fill[v]++] = w;
    level.degree[u] += w;
    level.degree[v] += w;
  }
  return level;
}

// Heavy-edge aggregation: an unaggregated vertex pairs with its heaviest
// unaggregated neighbor, otherwise joins the aggregate of its heaviest neighbor.
void aggregate(Level& level) {
  level.aggregate.assign(level.n, -1);
  VertexId next = 0;
  for (VertexId v = 0; v < level.n; ++v) {
    if (level.aggregate[v] >= 0) continue;
    VertexId best_free = -1;
    double best_free_w = -1.0;
    VertexId best_any = -1;
    double best_any_w = -1.0;
    for (std::size_t p = level.rowptr[v]; p < level.rowptr[v + 1]; ++p) {
      const VertexId u = level.col[p];
      const double w = level.val[p];
      if (level.aggregate[u] < 0 && w > best_free_w) {
        best_free = u;
        best_free_w = w;
      }
      if (w > best_any_w) {
        best_any = u;
        best_any_w = w;
      }
    }
    if (best_free >= 0) {
      level.aggregate[v] = level.aggregate[best_free] = next++;
    } else if (best_any >= 0) {
      level.aggregate[v] = level.aggregate[best_any];
    } else {
      level.aggregate[v] = next++;
    }
  }
  level.n_coarse = next;
}

Level coarsen(const Level& fine) {
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  for (VertexId i = 0; i < fine.n; ++i) {
    for (std::size_t p = fine.rowptr[i]; p < fine.rowptr[i + 1]; ++p) {
      const VertexId j = fine.col[p];
      if (i < j) edges.emplace_back(fine.aggregate[i], fine.aggregate[j], fine.val[p]);
    }
  }
  return make_level(fine.n_coarse, std::move(edges));
}

// Pseudo-inverse of a connected Laplacian: (L + J/n)^{-1} - J/n.
Matrix laplacian_pinv(const Level& level) {
  const VertexId n = level.n;
  Matrix l = Matrix::Zero(n, n);
  for (VertexId i = 0; i < n; ++i) {
    l(i, i) = level.degree[i];
    for (std::size_t p = level.rowptr[i]; p < level.rowptr[i + 1]; ++p) l(i, level.col[p]) -= level.val[p];
  }
  const double inv_n = 1.0 / n;
  Matrix m = l + Matrix::Constant(n, n, inv_n);
  Matrix inv = m.ldlt().solve(Matrix::Identity(n, n));
  inv.array() -= inv_n;
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

Preconditioner Preconditioner::build(const SparseGraph& g) {
  if (!g.is_connected()) throw std::invalid_argument("preconditioner: graph is disconnected");
  std::vector<std::tuple<VertexId, VertexId, double>> edges;
  edges.reserve(g.edges.size());
  for (const auto& e : g.edges) edges.emplace_back(e.u, e.v, e.w);

  Preconditioner p;
  p.n_ = g.n_vertices;
  auto levels = std::make_shared<std::vector<Level>>();
  Level current = make_level(g.n_vertices, std::move(edges));
  constexpr int kMaxLevels = 40;
  while (current.n > kDirectSolveSize) {
    aggregate(current);
    const bool stalled = current.n_coarse * 10 > current.n * 9;
    if (stalled || static_cast<int>(levels->size()) >= kMaxLevels) {
      const Level& top = levels->empty() ? current : levels->front();
      p.jacobi_ = std::make_shared<const Vector>(top.degree.cwiseInverse());
      return p;
    }
    Level coarse = coarsen(current);
    levels->push_back(std::move(current));
    current = std::move(coarse);
  }
  p.coarse_inverse_ = std::make_shared<const Matrix>(laplacian_pinv(current));
  p.levels_ = std::move(levels);
  return p;
}

Preconditioner Preconditioner::identity(VertexId n) {
  Preconditioner p;
  p.n_ = n;
  return p;
}

int Preconditioner::depth() const {
  if (!coarse_inverse_) return 0;
  return static_cast<int>(levels_->size()) + 1;
}

bool Preconditioner::is_jacobi() const { return static_cast<bool>(jacobi_); }

VertexId Preconditioner::dimension() const { return n_; }

Vector Preconditioner::vcycle(std::size_t l, const Vector& b) const {
  if (l == levels_->size()) return (*coarse_inverse_) * b;
  const Level& level = (*levels_)[l];
  const Vector inv_d = level.degree.cwiseInverse();
  Vector x = kOmega * b.cwiseProduct(inv_d);
  for (int s = 1; s < kSweeps; ++s) x += kOmega * (b - level.laplacian(x)).cwiseProduct(inv_d);

  const Vector r = b - level.laplacian(x);
  Vector rc = Vector::Zero(level.n_coarse);
  for (VertexId i = 0; i < level.n; ++i) rc[level.aggregate[i]] += r[i];
  const Vector xc = vcycle(l + 1, rc);
  for (VertexId i = 0; i < level.n; ++i) x[i] += xc[level.aggregate[i]];

  for (int s = 0; s < kSweeps; ++s) x += kOmega * (b - level.laplacian(x)).cwiseProduct(inv_d);
  return x;
}

Vector Preconditioner::apply(const Vector& r) const {
  Vector b = r.array() - r.mean();
  Vector x;
  if (jacobi_) {
    x = b.cwiseProduct(*jacobi_);
  } else if (coarse_inverse_) {
    x = vcycle(0, b);
  } else {
    x = b;
  }
  x.array() -= x.mean();
  return x;
}

Matrix Preconditioner::apply_block(const Matrix& r) const {
  Matrix out(r.rows(), r.cols());
  for (Eigen::Index j = 0; j < r.cols(); ++j) out.col(j) = apply(Vector(r.col(j)));
  return out;
}

}  // namespace ksp
