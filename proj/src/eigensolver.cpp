#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "kspecpart/eigensolver.hpp"
#include "kspecpart/log.hpp"

namespace ksp {
namespace {

void center_columns(Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j).array() -= x.col(j).mean();
}

void symmetrize(Matrix& m) { m = 0.5 * (m + m.transpose()).eval(); }

struct RitzPairs {
  Vector values;
  Matrix coeffs;
};

// Smallest `count` pairs of the projected pencil. The Gram matrix of the
// right-hand operator is shifted by a tiny multiple of the identity so the
// Cholesky inside the solver stays well posed.
RitzPairs rayleigh_ritz(Matrix ga, Matrix gb, Eigen::Index count) {
  symmetrize(ga);
  symmetrize(gb);
  const Eigen::Index dim = gb.rows();
  const double scale = std::max(gb.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  double reg = 1e-12 * scale;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix shifted = gb + reg * Matrix::Identity(dim, dim);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(ga, shifted);
    if (es.info() == Eigen::Success) {
      return {es.eigenvalues().head(count), es.eigenvectors().leftCols(count)};
    }
    reg *= 1e3;
  }
  throw std::runtime_error("eigensolver: projected pencil is not definite");
}

// Orthonormal basis for span[x, extra] that contains span(x) exactly.
// Extra directions nearly dependent on the current basis are dropped.
Matrix orthonormal_basis(const Matrix& x, const Matrix& extra) {
  Eigen::HouseholderQR<Matrix> qx(x);
  Matrix q = qx.householderQ() * Matrix::Identity(x.rows(), x.cols());
  if (extra.cols() == 0) return q;

  Matrix r = extra;
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    const double nrm = r.col(j).norm();
    if (nrm > 0) r.col(j) /= nrm;
  }
  for (int pass = 0; pass < 2; ++pass) r -= q * (q.transpose() * r);
  Eigen::ColPivHouseholderQR<Matrix> qr(r);
  qr.setThreshold(1e-8);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return q;
  Matrix qe = qr.householderQ() * Matrix::Identity(r.rows(), rank);
  for (int pass = 0; pass < 2; ++pass) qe -= q * (q.transpose() * qe);
  Eigen::HouseholderQR<Matrix> again(qe);
  qe = again.householderQ() * Matrix::Identity(qe.rows(), qe.cols());
  Matrix out(x.rows(), q.cols() + qe.cols());
  out << q, qe;
  return out;
}

double relative_residual(const Vector& ax, const Vector& bx, double lambda) {
  const Vector r = ax - lambda * bx;
  const double denom = std::max(ax.norm(), std::abs(lambda) * bx.norm());
  if (denom <= std::numeric_limits<double>::min()) return r.norm() > 0 ? 1.0 : 0.0;
  return r.norm() / denom;
}

void fix_signs(Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double a = std::abs(x(i, j));
      if (a > best * (1.0 + 1e-12)) {
        best = a;
        arg = i;
      }
    }
    if (x(arg, j) < 0) x.col(j) = -x.col(j);
  }
}

void finalize(EigenResult& out, const LinearOperator& a, const LinearOperator& b, int m) {
  fix_signs(out.eigenvectors);
  const Matrix ax = a.apply_block(out.eigenvectors);
  const Matrix bx = b.apply_block(out.eigenvectors);
  out.residuals.resize(m);
  for (int j = 0; j < m; ++j) {
    out.residuals[j] = relative_residual(ax.col(j), bx.col(j), out.eigenvalues[j]);
  }
}

EigenResult solve_dense(const LinearOperator& a, const LinearOperator& b, int m) {
  const Eigen::Index n = a.dimension();
  // Orthonormal basis of the complement of the constants.
  Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(n, 1));
  Matrix full = qr.householderQ();
  Matrix z = full.rightCols(n - 1);
  Matrix ga = z.transpose() * a.apply_block(z);
  Matrix gb = z.transpose() * b.apply_block(z);
  RitzPairs rr = rayleigh_ritz(ga, gb, m);
  EigenResult out;
  out.dense = true;
  out.converged = true;
  out.eigenvalues = rr.values;
  out.eigenvectors = z * rr.coeffs;
  return out;
}

}  // namespace

EigenResult solve_generalized(const LinearOperator& a, const LinearOperator& b, int m,
                              const Preconditioner& precond, const EigenOptions& opts) {
  const Eigen::Index n = a.dimension();
  if (b.dimension() != n) throw std::invalid_argument("eigensolver: dimension mismatch");
  if (m < 1 || m > n - 1) throw std::invalid_argument("eigensolver: need 1 <= m <= n - 1");

  const Eigen::Index block = std::min<Eigen::Index>(m + 2, n - 1);
  if (opts.dense_factor > 0 && n - 1 < opts.dense_factor * block) {
    EigenResult out = solve_dense(a, b, m);
    finalize(out, a, b, m);
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  center_columns(x);

  // Initial Rayleigh-Ritz on span(X).
  Matrix q = orthonormal_basis(x, Matrix(n, 0));
  Matrix aq = a.apply_block(q);
  Matrix bq = b.apply_block(q);
  RitzPairs rr = rayleigh_ritz(q.transpose() * aq, q.transpose() * bq, block);
  x = q * rr.coeffs;
  Matrix ax = aq * rr.coeffs;
  Matrix bx = bq * rr.coeffs;
  Vector lambda = rr.values;
  Matrix p(n, 0);

  EigenResult out;
  std::vector<double> res(block, 1.0);
  int iter = 0;
  for (;; ++iter) {
    out.ritz_history.emplace_back(lambda.head(m).data(), lambda.head(m).data() + m);
    std::vector<Eigen::Index> active;
    bool done = true;
    for (Eigen::Index j = 0; j < block; ++j) {
      res[j] = relative_residual(ax.col(j), bx.col(j), lambda[j]);
      if (res[j] > opts.tol) {
        active.push_back(j);
        if (j < m) done = false;
      }
    }
    if (done || iter >= opts.max_iter) {
      out.converged = done;
      break;
    }

    const auto n_active = static_cast<Eigen::Index>(active.size());
    Matrix r(n, n_active);
    for (Eigen::Index c = 0; c < n_active; ++c) {
      const Eigen::Index j = active[c];
      r.col(c) = ax.col(j) - lambda[j] * bx.col(j);
    }
    Matrix w = precond.apply_block(r);
    center_columns(w);

    Matrix extra(n, w.cols() + p.cols());
    extra << w, p;
    q = orthonormal_basis(x, extra);
    center_columns(q);
    aq = a.apply_block(q);
    bq = b.apply_block(q);
    rr = rayleigh_ritz(q.transpose() * aq, q.transpose() * bq, block);

    Matrix x_new = q * rr.coeffs;
    Matrix bx_new = bq * rr.coeffs;
    // Search direction: component of the new iterate B-orthogonal to the old one.
    Matrix p_all = x_new - x * (x.transpose() * bx_new);
    p.resize(n, n_active);
    Eigen::Index kept = 0;
    for (Eigen::Index j : active) {
      const double nrm = p_all.col(j).norm();
      if (nrm > 1e-14) p.col(kept++) = p_all.col(j) / nrm;
    }
    p.conservativeResize(n, kept);

    x = std::move(x_new);
    bx = std::move(bx_new);
    ax = aq * rr.coeffs;
    lambda = rr.values;
  }
  out.iterations = iter;
  if (!out.converged) {
    log::warn("eigensolver: not converged after " + std::to_string(iter) + " iterations");
  }
  out.eigenvalues = lambda.head(m);
  out.eigenvectors = x.leftCols(m);
  finalize(out, a, b, m);
  return out;
}

}  // namespace ksp
