#include "chemofv/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <fmt/format.h>
#include <fmt/ostream.h>

namespace chemofv {

SparseSystem::SparseSystem(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("sparse system must be square");
  a_.makeCompressed();
  const Eigen::Index n = a_.rows();
  row_sums_ = Vector::Zero(n);
  col_sums_ = Vector::Zero(n);
  diag_min_ = INFINITY;
  off_max_ = -INFINITY;
  tridiagonal_ = true;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Matrix::InnerIterator it(a_, j); it; ++it) {
      row_sums_[it.row()] += it.value();
      col_sums_[j] += it.value();
      if (it.row() == j)
        diag_min_ = std::min(diag_min_, it.value());
      else
        off_max_ = std::max(off_max_, it.value());
      if (std::abs(it.row() - j) > 1) tridiagonal_ = false;
    }
}

bool SparseSystem::structurally_symmetric() const {
  const Matrix t = a_.transpose();
  if (t.nonZeros() != a_.nonZeros()) return false;
  for (Eigen::Index j = 0; j < a_.outerSize(); ++j) {
    Matrix::InnerIterator p(a_, j), q(t, j);
    for (; p && q; ++p, ++q)
      if (p.row() != q.row()) return false;
    if (p || q) return false;
  }
  return true;
}

struct LinearSolver::Impl {
  SparseSystem::Matrix a;
  bool tridiagonal = false;
  // Thomas factors: lower multipliers, pivots, upper diagonal
  std::vector<double> lower, pivot, upper;
  Eigen::SparseLU<SparseSystem::Matrix, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  Eigen::Index analyzed_nnz = -1;
  std::vector<int> analyzed_inner;

  Vector raw_solve(const Vector& b) const {
    if (!tridiagonal) {
      Vector x = lu.solve(b);
      return x;
    }
    const Eigen::Index n = b.size();
    Vector x(n);
    x[0] = b[0];
    for (Eigen::Index i = 1; i < n; ++i) x[i] = b[i] - lower[i] * x[i - 1];
    x[n - 1] /= pivot[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = (x[i] - upper[i] * x[i + 1]) / pivot[i];
    return x;
  }
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::factorize(const SparseSystem& a) {
  Impl& s = *impl_;
  s.a = a.matrix();
  const Eigen::Index n = a.dimension();
  s.tridiagonal = a.tridiagonal() && n >= 2;
  if (s.tridiagonal) {
    s.lower.assign(n, 0.0);
    s.pivot.assign(n, 0.0);
    s.upper.assign(n, 0.0);
    std::vector<double> diag(n, 0.0);
    for (Eigen::Index j = 0; j < n; ++j)
      for (SparseSystem::Matrix::InnerIterator it(s.a, j); it; ++it) {
        if (it.row() == j) diag[j] = it.value();
        else if (it.row() == j - 1) s.upper[j - 1] = it.value();
        else s.lower[j + 1] = it.value();
      }
    s.pivot[0] = diag[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      if (s.pivot[i - 1] == 0.0) throw std::runtime_error("singular tridiagonal system");
      s.lower[i] /= s.pivot[i - 1];
      s.pivot[i] = diag[i] - s.lower[i] * s.upper[i - 1];
    }
    if (s.pivot[n - 1] == 0.0) throw std::runtime_error("singular tridiagonal system");
    return;
  }
  const int* inner = s.a.innerIndexPtr();
  const bool same_pattern = s.analyzed && s.analyzed_nnz == s.a.nonZeros() &&
                            std::equal(s.analyzed_inner.begin(), s.analyzed_inner.end(), inner);
  if (!same_pattern) {
    s.lu.analyzePattern(s.a);
    s.analyzed = true;
    s.analyzed_nnz = s.a.nonZeros();
    s.analyzed_inner.assign(inner, inner + s.a.nonZeros());
  }
  s.lu.factorize(s.a);
  if (s.lu.info() != Eigen::Success)
    throw std::runtime_error(fmt::format("sparse factorization failed: {}", s.lu.lastErrorMessage()));
}

Vector LinearSolver::solve(const Vector& b, double tol_rel) const {
  const Impl& s = *impl_;
  if (b.size() != s.a.rows())
    throw std::invalid_argument(fmt::format("right-hand side has size {} for a {}x{} system",
                                            b.size(), s.a.rows(), s.a.cols()));
  if (!(tol_rel > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!b.allFinite()) throw std::invalid_argument("non-finite right-hand side");
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(b.size());
  Vector x = s.raw_solve(b);
  Vector r = b - s.a * x;
  // one round of iterative refinement before giving up
  if (!(r.norm() <= tol_rel * bnorm)) {
    x += s.raw_solve(r);
    r = b - s.a * x;
  }
  const double anorm = (s.a.cwiseAbs() * Vector::Ones(s.a.cols())).maxCoeff();
  const double rel = r.lpNorm<Eigen::Infinity>() /
                     (anorm * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  if (!(rel <= tol_rel) || !x.allFinite())
    throw std::runtime_error(
        fmt::format("linear solve residual {:.3e} above tolerance {:.3e}", rel, tol_rel));
  return x;
}

Vector solve(const SparseSystem& a, const Vector& b, double tol_rel) {
  if (b.size() != a.dimension()) throw std::invalid_argument("dimension mismatch");
  LinearSolver s;
  s.factorize(a);
  return s.solve(b, tol_rel);
}

SparseSystem::Matrix stiffness_matrix(const Mesh& mesh) {
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(n + 2 * mesh.num_interior_edges());
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    t.emplace_back(e.k, e.k, e.transmissibility);
    t.emplace_back(e.l, e.l, e.transmissibility);
    t.emplace_back(e.k, e.l, -e.transmissibility);
    t.emplace_back(e.l, e.k, -e.transmissibility);
  }
  SparseSystem::Matrix s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

struct ZeroMeanPoisson::Impl {
  std::uint64_t mesh_id = 0;
  Vector volume;
  double total = 0.0;
  double scale = 1.0;
  SparseSystem::Matrix stiffness;
  SparseSystem::Matrix bordered;
  Eigen::SparseLU<SparseSystem::Matrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<double> chain;  // tau between k and k+1 when the cells form a chain
};

ZeroMeanPoisson::ZeroMeanPoisson(const Mesh& mesh) : impl_(std::make_unique<Impl>()) {
  if (!mesh.connected()) throw std::invalid_argument("zero-mean Poisson needs a connected mesh");
  Impl& s = *impl_;
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells());
  s.mesh_id = mesh.id();
  s.volume.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) s.volume[k] = mesh.cell(k).volume;
  s.total = mesh.measure();
  s.stiffness = stiffness_matrix(mesh);
  if (SparseSystem(s.stiffness).tridiagonal() && n >= 2) {
    s.chain.resize(n - 1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) s.chain[k] = -s.stiffness.coeff(k, k + 1);
    return;
  }
  // border entries a hundredth of the smallest diagonal, so pivoting keeps to the diagonal
  double diag_min = INFINITY;
  for (Eigen::Index k = 0; k < n; ++k) diag_min = std::min(diag_min, s.stiffness.coeff(k, k));
  s.scale = 1e-2 * diag_min / s.volume.maxCoeff();
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index j = 0; j < n; ++j)
    for (SparseSystem::Matrix::InnerIterator it(s.stiffness, j); it; ++it)
      t.emplace_back(it.row(), j, it.value());
  for (Eigen::Index k = 0; k < n; ++k) {
    t.emplace_back(k, n, s.scale * s.volume[k]);
    t.emplace_back(n, k, s.scale * s.volume[k]);
  }
  s.bordered.resize(n + 1, n + 1);
  s.bordered.setFromTriplets(t.begin(), t.end());
  s.bordered.makeCompressed();
  s.lu.setPivotThreshold(0.1);
  s.lu.analyzePattern(s.bordered);
  s.lu.factorize(s.bordered);
  if (s.lu.info() != Eigen::Success) throw std::runtime_error("zero-mean Poisson factorization failed");
}

ZeroMeanPoisson::~ZeroMeanPoisson() = default;
ZeroMeanPoisson::ZeroMeanPoisson(ZeroMeanPoisson&&) noexcept = default;

DiscreteField ZeroMeanPoisson::solve(const DiscreteField& rhs, double magnitude) const {
  const Impl& s = *impl_;
  if (rhs.mesh_id() != s.mesh_id || static_cast<Eigen::Index>(rhs.size()) != s.volume.size())
    throw std::invalid_argument("field does not belong to this mesh");
  const Eigen::Index n = s.volume.size();
  Vector f(n);
  long double mass = 0.0L, abs_mass = 0.0L;
  for (Eigen::Index k = 0; k < n; ++k) {
    f[k] = s.volume[k] * rhs[k];
    mass += f[k];
    abs_mass += std::abs(f[k]);
  }
  if (std::abs(static_cast<double>(mass)) >
      1e-10 * std::max(static_cast<double>(abs_mass), std::abs(magnitude) * s.total))
    throw std::invalid_argument(fmt::format("right-hand side has nonzero mean {:.3e}",
                                            static_cast<double>(mass) / s.total));
  // drop the round-off mean so the system is consistent
  f -= (static_cast<double>(mass) / s.total) * s.volume;
  std::vector<double> out(n, 0.0);
  if (abs_mass == 0.0L || f.cwiseAbs().maxCoeff() == 0.0) {
    DiscreteField z = rhs;
    z.values() = out;
    return z;
  }
  if (!s.chain.empty()) {
    // integrate the flux along the chain, then shift to zero mean
    Vector z(n);
    z[0] = 0.0;
    long double flux = 0.0L;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      flux += f[k];
      z[k + 1] = z[k] - static_cast<double>(flux) / s.chain[k];
    }
    z.array() -= s.volume.dot(z) / s.total;
    const double snorm = (s.stiffness.cwiseAbs() * Vector::Ones(n)).maxCoeff();
    const double rel = (f - s.stiffness * z).lpNorm<Eigen::Infinity>() /
                       (snorm * z.lpNorm<Eigen::Infinity>() + f.lpNorm<Eigen::Infinity>());
    if (!(rel <= 1e-10) || !z.allFinite())
      throw std::runtime_error(fmt::format("zero-mean Poisson residual {:.3e} above tolerance", rel));
    for (Eigen::Index k = 0; k < n; ++k) out[k] = z[k];
    DiscreteField w = rhs;
    w.values() = std::move(out);
    return w;
  }
  Vector b = Vector::Zero(n + 1);
  b.head(n) = f;
  const double fnorm = f.norm();
  auto residual = [&](const Vector& x) {
    Vector r(n + 1);
    r.head(n) = f - s.stiffness * x.head(n);
    r[n] = -s.scale * s.volume.dot(x.head(n));
    return r;
  };
  auto mean_ok = [&](const Vector& x) {
    return std::abs(s.volume.dot(x.head(n))) <= 1e-13 * s.total * x.head(n).norm();
  };
  Vector x = s.lu.solve(b);
  Vector r = residual(x);
  for (int refine = 0; refine < 2 && !(r.head(n).norm() <= 1e-12 * fnorm && mean_ok(x)); ++refine) {
    x += s.lu.solve(r);
    r = residual(x);
  }
  if (!(r.head(n).norm() <= 1e-10 * fnorm) || !x.allFinite())
    throw std::runtime_error(
        fmt::format("zero-mean Poisson residual {:.3e} above tolerance", r.head(n).norm() / fnorm));
  for (Eigen::Index k = 0; k < n; ++k) out[k] = x[k];
  DiscreteField z = rhs;
  z.values() = std::move(out);
  return z;
}

DiscreteField solve_zero_mean_poisson(const Mesh& mesh, const DiscreteField& rhs) {
  rhs.require(mesh);
  return ZeroMeanPoisson(mesh).solve(rhs);
}

EigenResult smallest_nonzero_eigenpair(const Mesh& mesh, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells());
  if (n < 2) throw std::invalid_argument("eigenvalue needs at least two cells");
  const ZeroMeanPoisson poisson(mesh);
  const SparseSystem::Matrix stiff = stiffness_matrix(mesh);
  Vector m(n);
  for (Eigen::Index k = 0; k < n; ++k) m[k] = mesh.cell(k).volume;
  const double total = mesh.measure();
  const Eigen::Index b = std::min<Eigen::Index>(3, n - 1);

  auto deflate = [&](Eigen::Ref<Vector> x) { x.array() -= m.dot(x) / total; };

  std::mt19937_64 gen(20240917);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd x(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) x(k, j) = dist(gen);
    deflate(x.col(j));
  }

  EigenResult res;
  double previous = INFINITY;
  DiscreteField field(mesh);
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::MatrixXd y(n, b);
    for (Eigen::Index j = 0; j < b; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) field[k] = x(k, j);
      const DiscreteField z = poisson.solve(field);
      for (Eigen::Index k = 0; k < n; ++k) y(k, j) = z[k];
    }
    // Rayleigh-Ritz for S y = lambda M y on span(y)
    const Eigen::MatrixXd sy = stiff * y;
    const Eigen::MatrixXd a = y.transpose() * sy;
    const Eigen::MatrixXd bm = y.transpose() * m.asDiagonal() * y;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(0.5 * (a + a.transpose()),
                                                                  0.5 * (bm + bm.transpose()));
    if (ges.info() != Eigen::Success) throw std::runtime_error("Rayleigh-Ritz step failed");
    x = y * ges.eigenvectors();
    for (Eigen::Index j = 0; j < b; ++j) {
      deflate(x.col(j));
      x.col(j) /= std::sqrt(x.col(j).dot(m.asDiagonal() * x.col(j)));
    }
    const double lambda = ges.eigenvalues()[0];
    const Vector v = x.col(0);
    const Vector r = (stiff * v).cwiseQuotient(m) - lambda * v;
    res.value = lambda;
    res.vector = v;
    res.iterations = it;
    res.residual = r.norm() / (lambda * v.norm());
    if (res.residual <= tol || (std::abs(lambda - previous) <= 1e-15 * lambda && res.residual <= std::sqrt(tol)))
      return res;
    previous = lambda;
  }
  throw std::runtime_error(fmt::format("eigenvalue iteration stagnated at residual {:.3e}",
                                       res.residual));
}

double smallest_nonzero_eigenvalue(const Mesh& mesh, double tol) {
  return smallest_nonzero_eigenpair(mesh, tol).value;
}

void write_coordinate(std::ostream& out, const SparseSystem& a) {
  const auto& m = a.matrix();
  fmt::print(out, "%%MatrixMarket matrix coordinate real general\n{} {} {}\n", m.rows(), m.cols(),
             m.nonZeros());
  for (Eigen::Index j = 0; j < m.outerSize(); ++j)
    for (SparseSystem::Matrix::InnerIterator it(m, j); it; ++it)
      fmt::print(out, "{} {} {:.17g}\n", it.row() + 1, j + 1, it.value());
}

}  // namespace chemofv
