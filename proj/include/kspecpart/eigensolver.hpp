#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "kspecpart/operators.hpp"

namespace ksp {

// Multilevel support-graph preconditioner for a connected graph Laplacian.
// Approximates the pseudo-inverse on the range of L (vectors orthogonal to
// the constants). Levels are built by heavy-edge aggregation; each level does
// symmetric weighted-Jacobi smoothing, and the coarsest level (<= 64 vertices)
// is solved exactly. Falls back to plain Jacobi if coarsening stalls.
class Preconditioner {
 public:
  static constexpr VertexId kDirectSolveSize = 64;

  Preconditioner() = default;

  // Throws std::invalid_argument if g is disconnected.
  static Preconditioner build(const SparseGraph& g);

  // Identity preconditioner on mean-zero vectors.
  static Preconditioner identity(VertexId n);

  Vector apply(const Vector& r) const;
  Matrix apply_block(const Matrix& r) const;

  // Number of levels including the coarsest one; 0 for identity/Jacobi.
  int depth() const;
  bool is_jacobi() const;
  VertexId dimension() const;

  struct Level;

 private:
  std::shared_ptr<const std::vector<Level>> levels_;
  std::shared_ptr<const Matrix> coarse_inverse_;
  std::shared_ptr<const Vector> jacobi_;  // inverse diagonal when in Jacobi mode
  VertexId n_ = 0;

  Vector vcycle(std::size_t level, const Vector& b) const;
};

struct EigenOptions {
  double tol = 1e-6;
  int max_iter = 200;
  std::uint64_t seed = 1;
  // Problems whose deflated dimension is below dense_factor * block size are
  // solved by a dense reduction instead of the iterative method. 0 disables.
  int dense_factor = 5;
};

struct EigenResult {
  Vector eigenvalues;          // ascending
  Matrix eigenvectors;         // n x m, B-orthonormal, orthogonal to constants
  std::vector<double> residuals;
  // First m Ritz values at the start of every iteration.
  std::vector<std::vector<double>> ritz_history;
  int iterations = 0;
  bool converged = false;
  bool dense = false;
};

// Smallest m nontrivial pairs of a x = lambda b x, where both a and b
// annihilate the constant vector and a is positive definite on its
// complement. Block preconditioned iteration (block size m + 2) with the
// constants deflated; Rayleigh-Ritz on an orthonormalized [X, W, P] basis.
// Each column is scaled so that its largest-magnitude entry is positive.
EigenResult solve_generalized(const LinearOperator& a, const LinearOperator& b, int m,
                              const Preconditioner& precond, const EigenOptions& opts = {});

}  // namespace ksp
