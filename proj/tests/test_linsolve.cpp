#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chemofv/diagnostics.hpp"
#include "chemofv/generators.hpp"
#include "chemofv/linsolve.hpp"
#include "support/meshes.hpp"
#include "support/oracles.hpp"

using namespace chemofv;

namespace {

SparseSystem random_mmatrix(int n, bool tridiagonal, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.1, 1.0);
  std::vector<Eigen::Triplet<double>> t;
  std::vector<double> off(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (tridiagonal ? std::abs(i - j) != 1 : d(rng) > 0.5) continue;
      const double a = -d(rng);
      t.emplace_back(i, j, a);
      off[i] += -a;
    }
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, off[i] + d(rng));
  SparseSystem::Matrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return SparseSystem(a);
}

oracle::Dense dense(const SparseSystem& s) {
  oracle::Dense a = oracle::zeros(s.dimension(), s.dimension());
  for (int i = 0; i < s.dimension(); ++i)
    for (int j = 0; j < s.dimension(); ++j) a[i][j] = s.coeff(i, j);
  return a;
}

}  // namespace

TEST(LinearSolver, MatchesDenseEliminationOnRandomSystems) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (bool tri : {true, false})
    for (int n : {2, 5, 17, 40}) {
      const SparseSystem a = random_mmatrix(n, tri, rng);
      EXPECT_EQ(a.tridiagonal(), tri || n == 2);
      Vector b(n);
      for (int i = 0; i < n; ++i) b[i] = d(rng);
      const Vector x = solve(a, b);
      const std::vector<double> ref = oracle::gauss_solve(dense(a), {b.data(), b.data() + n});
      for (int i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12 * (1.0 + std::abs(ref[i])));
    }
}

TEST(LinearSolver, RefactorizeWithSamePattern) {
  std::mt19937_64 rng(5);
  LinearSolver s;
  for (int rep = 0; rep < 3; ++rep) {
    const SparseSystem a = random_mmatrix(12, false, rng);
    s.factorize(a);
    Vector b = Vector::Ones(12);
    const Vector x = s.solve(b);
    EXPECT_LE((a.matrix() * x - b).norm(), 1e-12 * b.norm());
  }
}

TEST(LinearSolver, RejectsSingularAndMisuse) {
  SparseSystem::Matrix z(3, 3);
  z.insert(0, 0) = 1.0;
  z.insert(1, 1) = 1.0;
  LinearSolver s;
  EXPECT_THROW(s.solve(Vector::Ones(3)), std::logic_error);
  EXPECT_THROW(s.factorize(SparseSystem(z)), std::runtime_error);
}

TEST(SparseSystem, SumsAndSigns) {
  std::mt19937_64 rng(2);
  const SparseSystem a = random_mmatrix(9, false, rng);
  const oracle::Dense m = dense(a);
  for (int i = 0; i < 9; ++i) {
    double r = 0.0, c = 0.0;
    for (int j = 0; j < 9; ++j) {
      r += m[i][j];
      c += m[j][i];
    }
    EXPECT_NEAR(a.row_sums()[i], r, 1e-14);
    EXPECT_NEAR(a.column_sums()[i], c, 1e-14);
  }
  EXPECT_GT(a.diagonal_min(), 0.0);
  EXPECT_LE(a.offdiagonal_max(), 0.0);
  std::ostringstream out;
  write_coordinate(out, a);
  EXPECT_EQ(out.str().rfind("%%MatrixMarket", 0), 0u);
}

TEST(ZeroMeanPoisson, MatchesConstrainedDenseSolve) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const Triangulation t = disk_mesh(1.0, 24);
  const std::vector<Mesh> meshes{testmesh::interval(testmesh::random_nodes(7, rng)),
                                 testmesh::hexagon_fan(5, 0.05, rng),
                                 build_from_triangulation(t.vertices, t.triangles)};
  for (const Mesh& m : meshes) {
    const ZeroMeanPoisson p(m);
    DiscreteField w(m);
    for (std::size_t k = 0; k < m.num_cells(); ++k) w[k] = d(rng);
    w += -mean_value(m, w);
    const DiscreteField z = p.solve(w);
    const std::vector<double> ref = oracle::constrained_poisson(m, w.values());
    double scale = 0.0;
    for (double r : ref) scale = std::max(scale, std::abs(r));
    for (std::size_t k = 0; k < m.num_cells(); ++k) EXPECT_NEAR(z[k], ref[k], 1e-11 * scale);
    EXPECT_NEAR(mean_value(m, z), 0.0, 1e-13 * scale);
  }
}

TEST(ZeroMeanPoisson, LongChainMatchesDenseSolve) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> d(0.0, 3.0);
  const Mesh m = testmesh::interval(testmesh::random_nodes(300, rng));
  DiscreteField w(m);
  for (std::size_t k = 0; k < m.num_cells(); ++k) w[k] = d(rng);
  w += -mean_value(m, w);
  const DiscreteField z = ZeroMeanPoisson(m).solve(w);
  const std::vector<double> ref = oracle::constrained_poisson(m, w.values());
  double scale = 0.0;
  for (double r : ref) scale = std::max(scale, std::abs(r));
  for (std::size_t k = 0; k < m.num_cells(); ++k) EXPECT_NEAR(z[k], ref[k], 1e-11 * scale);
  EXPECT_NEAR(oracle::dual_norm(m, w.values()), dual_norm(m, w), 1e-12 * dual_norm(m, w));
}

TEST(ZeroMeanPoisson, RejectsNonzeroMean) {
  const Mesh m = build_uniform_1d(0.0, 1.0, 6);
  const ZeroMeanPoisson p(m);
  EXPECT_THROW(p.solve(DiscreteField(m, 1.0)), std::invalid_argument);
  // round-off noise of a constant field is accepted once its magnitude is given
  DiscreteField w(m, std::vector<double>{1e-16, 0, 0, 0, 0, 0});
  EXPECT_NO_THROW(p.solve(w, 1.0));
  EXPECT_THROW(p.solve(DiscreteField(build_uniform_1d(0.0, 1.0, 6), 0.0)), std::invalid_argument);
}

TEST(Eigenvalue, UniformGridClosedForm) {
  for (int n : {8, 50, 200}) {
    const Mesh m = build_uniform_1d(0.0, 1.0, n);
    const double exact = 4.0 * n * n * std::pow(std::sin(std::numbers::pi / (2.0 * n)), 2);
    EXPECT_NEAR(smallest_nonzero_eigenvalue(m), exact, 1e-8 * exact);
  }
}

TEST(Eigenvalue, DenseInverseIterationOracle) {
  std::mt19937_64 rng(4);
  const Mesh m = testmesh::interval(testmesh::random_nodes(8, rng));
  const EigenResult r = smallest_nonzero_eigenpair(m);
  // inverse iteration on the zero-mean subspace with the dense constrained solve
  const std::size_t n = m.num_cells();
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = std::cos(0.7 * k) + 0.01 * k * k;
  double lambda = 0.0;
  for (int it = 0; it < 400; ++it) {
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean += m.cell(k).volume * x[k];
    for (double& v : x) v -= mean / m.measure();
    x = oracle::constrained_poisson(m, x);
    double nrm = 0.0;
    for (std::size_t k = 0; k < n; ++k) nrm += m.cell(k).volume * x[k] * x[k];
    for (double& v : x) v /= std::sqrt(nrm);
    lambda = oracle::seminorm_sq(m, x);
  }
  EXPECT_NEAR(r.value, lambda, 1e-9 * lambda);
  EXPECT_LE(r.residual, 1e-8);
}
