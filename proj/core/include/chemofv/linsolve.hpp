#pragma once

#include <iosfwd>
#include <memory>

#include <Eigen/Sparse>

#include "chemofv/mesh.hpp"

namespace chemofv {

using Vector = Eigen::VectorXd;

/// Square sparse matrix over cells with cached sums and sign summary.
class SparseSystem {
 public:
  using Matrix = Eigen::SparseMatrix<double>;

  explicit SparseSystem(Matrix a);

  const Matrix& matrix() const { return a_; }
  Eigen::Index dimension() const { return a_.rows(); }
  const Vector& row_sums() const { return row_sums_; }
  const Vector& column_sums() const { return col_sums_; }
  double diagonal_min() const { return diag_min_; }
  double offdiagonal_max() const { return off_max_; }
  bool tridiagonal() const { return tridiagonal_; }
  bool structurally_symmetric() const;
  double coeff(Eigen::Index i, Eigen::Index j) const { return a_.coeff(i, j); }

 private:
  Matrix a_;
  Vector row_sums_, col_sums_;
  double diag_min_ = 0.0;
  double off_max_ = 0.0;
  bool tridiagonal_ = false;
};

/// Direct solver that keeps its symbolic analysis across refactorizations with the same pattern.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factorize(const SparseSystem& a);
  /// Solution with backward error ||Ax - b|| / (||A|| ||x|| + ||b||) <= tol_rel, infinity norms.
  Vector solve(const Vector& b, double tol_rel = 1e-10) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Vector solve(const SparseSystem& a, const Vector& b, double tol_rel = 1e-10);

/// Stiffness matrix of the TPFA Laplacian: sum of tau on the diagonal, -tau off it.
SparseSystem::Matrix stiffness_matrix(const Mesh& mesh);

/// Zero-mean solution of -sum_sigma tau D z = m(K) rhs_K, factorized once per mesh.
class ZeroMeanPoisson {
 public:
  explicit ZeroMeanPoisson(const Mesh& mesh);
  ~ZeroMeanPoisson();
  ZeroMeanPoisson(ZeroMeanPoisson&&) noexcept;

  /// The mean of rhs must vanish up to round-off relative to |rhs| or to `magnitude`, the size
  /// of the field the zero-mean rhs was obtained from.
  DiscreteField solve(const DiscreteField& rhs, double magnitude = 0.0) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DiscreteField solve_zero_mean_poisson(const Mesh& mesh, const DiscreteField& rhs);

struct EigenResult {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
  double residual = 0.0;  ///< ||L x - lambda x|| / (lambda ||x||)
};

/// First nonzero eigenvalue of the FV Laplacian L = diag(m)^-1 S by block inverse iteration
/// on the zero-mean subspace with Rayleigh-Ritz in the volume inner product.
EigenResult smallest_nonzero_eigenpair(const Mesh& mesh, double tol = 1e-10,
                                       int max_iterations = 1000);
double smallest_nonzero_eigenvalue(const Mesh& mesh, double tol = 1e-10);

/// MatrixMarket coordinate dump.
void write_coordinate(std::ostream& out, const SparseSystem& a);

}  // namespace chemofv
