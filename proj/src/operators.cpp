#include "kspecpart/operators.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ksp {

LinearOperator::LinearOperator(Eigen::Index dim, ApplyFn fn)
    : dim_(dim), fn_(std::make_shared<const ApplyFn>(std::move(fn))) {}

Vector LinearOperator::apply(const Vector& x) const {
  Vector y = Vector::Zero(dim_);
  (*fn_)(x, y);
  return y;
}

Matrix LinearOperator::apply_block(const Matrix& x) const {
  Matrix y(dim_, x.cols());
  Vector col;
  Vector out(dim_);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    col = x.col(j);
    out.setZero();
    (*fn_)(col, out);
    y.col(j) = out;
  }
  return y;
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("operator sum: dimension mismatch");
  auto fa = a.fn_;
  auto fb = b.fn_;
  return LinearOperator(a.dim_, [fa, fb](const Vector& x, Vector& y) {
    (*fa)(x, y);
    Vector tmp = Vector::Zero(y.size());
    (*fb)(x, tmp);
    y += tmp;
  });
}

bool SparseGraph::is_connected() const {
  if (n_vertices <= 1) return true;
  std::vector<VertexId> parent(n_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  VertexId components = n_vertices;
  for (const Edge& e : edges) {
    VertexId a = find(e.u);
    VertexId b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

LinearOperator clique_laplacian(std::shared_ptr<const Hypergraph> h) {
  const Eigen::Index n = h->num_vertices();
  return LinearOperator(n, [h](const Vector& x, Vector& y) {
    y.setZero();
    for (EdgeId e = 0; e < h->num_edges(); ++e) {
      auto pins = h->pins(e);
      const auto size = static_cast<double>(pins.size());
      const double c = static_cast<double>(h->edge_weight(e)) / (size - 1.0);
      double sum = 0.0;
      for (VertexId v : pins) sum += x[v];
      for (VertexId v : pins) y[v] += c * (size * x[v] - sum);
    }
  });
}

LinearOperator clique_laplacian(const Hypergraph& h) {
  return clique_laplacian(std::make_shared<const Hypergraph>(h));
}

LinearOperator weight_balance_laplacian(std::vector<Weight> vertex_weights) {
  const auto n = static_cast<Eigen::Index>(vertex_weights.size());
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = static_cast<double>(vertex_weights[i]);
  const double total = w.sum();
  if (!(total > 0.0)) throw std::invalid_argument("weight balance: total weight must be positive");
  return LinearOperator(n, [w, total](const Vector& x, Vector& y) {
    y = total * w.cwiseProduct(x) - w.dot(x) * w;
  });
}

LinearOperator hint_laplacian(const Partition& two_way) {
  if (two_way.k != 2) throw std::invalid_argument("hint: expected a 2-way partition");
  std::vector<BlockId> labels = two_way.labels;
  const auto n = static_cast<Eigen::Index>(labels.size());
  std::array<double, 2> count{0.0, 0.0};
  for (BlockId b : labels) count[b] += 1.0;
  if (count[0] == 0.0 || count[1] == 0.0) throw std::invalid_argument("hint: empty block");
  return LinearOperator(n, [labels = std::move(labels), count](const Vector& x, Vector& y) {
    std::array<double, 2> sum{0.0, 0.0};
    for (Eigen::Index i = 0; i < x.size(); ++i) sum[labels[i]] += x[i];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const BlockId other = 1 - labels[i];
      y[i] = count[other] * x[i] - sum[other];
    }
  });
}

LinearOperator graph_laplacian(std::shared_ptr<const SparseGraph> g) {
  return LinearOperator(g->n_vertices, [g](const Vector& x, Vector& y) {
    y.setZero();
    for (const auto& e : g->edges) {
      const double d = e.w * (x[e.u] - x[e.v]);
      y[e.u] += d;
      y[e.v] -= d;
    }
  });
}

LinearOperator graph_laplacian(const SparseGraph& g) {
  return graph_laplacian(std::make_shared<const SparseGraph>(g));
}

SparseGraph build_sparsifier(const Hypergraph& h, int zeta, std::uint64_t seed) {
  if (zeta < 1) throw std::invalid_argument("sparsifier: zeta must be >= 1");
  SparseGraph g;
  g.n_vertices = h.num_vertices();
  g.edges.reserve(static_cast<std::size_t>(zeta) * h.num_pins());
  std::mt19937_64 rng(seed);
  std::vector<VertexId> order;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    auto pins = h.pins(e);
    const double w = static_cast<double>(h.edge_weight(e)) / zeta;
    for (int c = 0; c < zeta; ++c) {
      if (pins.size() == 2) {
        g.edges.push_back({pins[0], pins[1], w});
        continue;
      }
      order.assign(pins.begin(), pins.end());
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i = 0; i < order.size(); ++i) {
        g.edges.push_back({order[i], order[(i + 1) % order.size()], w});
      }
    }
  }
  return g;
}

}  // namespace ksp
