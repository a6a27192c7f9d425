#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "chemofv/generators.hpp"
#include "chemofv/mesh.hpp"
#include "chemofv/quadrature.hpp"
#include "support/meshes.hpp"

using namespace chemofv;

TEST(UniformInterval, GeometryAndTransmissibilities) {
  const Mesh m = build_uniform_1d(0.0, 2.0, 8);
  EXPECT_EQ(m.dimension(), 1);
  EXPECT_EQ(m.num_cells(), 8u);
  EXPECT_EQ(m.num_interior_edges(), 7u);
  EXPECT_EQ(m.num_edges(), 9u);
  EXPECT_DOUBLE_EQ(m.measure(), 2.0);
  EXPECT_DOUBLE_EQ(m.size(), 0.25);
  for (const Edge& e : m.edges()) {
    EXPECT_DOUBLE_EQ(e.transmissibility, e.measure / e.distance);
    EXPECT_DOUBLE_EQ(e.transmissibility, e.boundary() ? 8.0 : 4.0);
  }
  EXPECT_TRUE(m.connected());
}

TEST(UniformInterval, RejectsBadInput) {
  EXPECT_THROW(build_uniform_1d(1.0, 0.0, 4), std::invalid_argument);
  EXPECT_THROW(build_uniform_1d(0.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(build_uniform_1d(0.0, NAN, 4), std::invalid_argument);
}

TEST(Incidence, InteriorEdgesFirst) {
  const Mesh m = build_uniform_1d(0.0, 1.0, 5);
  for (int k = 0; k < 5; ++k) {
    const auto all = m.cell_edges(k);
    const auto in = m.interior_edges(k);
    const auto bd = m.boundary_edges(k);
    EXPECT_EQ(all.size(), in.size() + bd.size());
    for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(all[i], in[i]);
    for (int e : in) EXPECT_FALSE(m.edge(e).boundary());
    for (int e : bd) EXPECT_TRUE(m.edge(e).boundary());
  }
  EXPECT_EQ(m.neighbors(0), std::vector<int>{1});
  EXPECT_EQ(m.neighbors(2), (std::vector<int>{1, 3}));
}

TEST(Triangulation, EquilateralFanGeometry) {
  std::mt19937_64 rng(1);
  const Mesh m = testmesh::hexagon_fan(6, 0.0, rng);
  EXPECT_EQ(m.num_cells(), 6u);
  EXPECT_EQ(m.num_interior_edges(), 6u);
  EXPECT_EQ(m.num_edges(), 12u);
  EXPECT_NEAR(m.measure(), 3.0 * std::sqrt(3.0) / 2.0, 1e-14);
  // interior edges of equilateral triangles of side 1: d = 1/sqrt(3), tau = sqrt(3)
  for (const Edge& e : m.edges()) {
    EXPECT_NEAR(e.measure, 1.0, 1e-14);
    EXPECT_NEAR(e.transmissibility, e.boundary() ? 2.0 * std::sqrt(3.0) : std::sqrt(3.0), 1e-12);
  }
  const AdmissibilityReport r = check_admissibility(m, 0.4);
  EXPECT_TRUE(r.ok);
  EXPECT_NEAR(r.worst_ratio, 0.5, 1e-12);
}

TEST(Triangulation, CentersOnEdgeBisectors) {
  const Triangulation t = disk_mesh(1.0, 36);
  const Mesh m = build_from_triangulation(t.vertices, t.triangles);
  for (const Edge& e : m.edges()) {
    const Point xk = m.cell(e.k).center;
    // x_K - midpoint is parallel to the normal
    const double cross = (e.midpoint.x - xk.x) * e.normal.y - (e.midpoint.y - xk.y) * e.normal.x;
    EXPECT_NEAR(cross, 0.0, 1e-12);
    EXPECT_NEAR(std::hypot(e.normal.x, e.normal.y), 1.0, 1e-14);
  }
}

TEST(Triangulation, ObtuseTriangleFailsAdmissibility) {
  // the flat triangle's circumcenter lies below the shared edge, on the far side of it
  const std::vector<Point> v{{0, 0}, {1, 0}, {0.5, 0.1}, {0.5, -3.0}};
  const std::vector<std::array<int, 3>> t{{0, 1, 2}, {0, 3, 1}};
  const Mesh m = build_from_triangulation(v, t);
  const AdmissibilityReport r = check_admissibility(m, 1e-3);
  EXPECT_FALSE(r.ok);
  EXPECT_LT(r.worst_ratio, 0.0);
  EXPECT_FALSE(r.offending_edges.empty());
  // centers that swap sides give a negative distance, which no scheme can use
  const std::vector<Point> w{{0, 0}, {1, 0}, {0.5, 0.1}, {0.5, -0.8}};
  EXPECT_THROW(build_from_triangulation(w, t), std::invalid_argument);
}

TEST(Triangulation, RejectsDegenerateAndNonConforming) {
  const std::vector<Point> v{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}};
  EXPECT_THROW(build_from_triangulation(v, {{0, 1, 2}}), std::invalid_argument);
  EXPECT_THROW(build_from_triangulation(v, {{0, 1, 7}}), std::invalid_argument);
  EXPECT_THROW(build_from_triangulation(v, {{0, 1, 3}, {0, 1, 4}, {1, 0, 4}}),
               std::invalid_argument);
  EXPECT_THROW(build_from_triangulation(v, {}), std::invalid_argument);
}

TEST(DiscreteField, ArithmeticAndMeshBinding) {
  const Mesh a = build_uniform_1d(0.0, 1.0, 4);
  const Mesh b = build_uniform_1d(0.0, 1.0, 4);
  DiscreteField f(a, 2.0), g(a, std::vector<double>{1, 2, 3, 4});
  const DiscreteField h = f + g;
  EXPECT_DOUBLE_EQ(h[3], 6.0);
  EXPECT_DOUBLE_EQ((0.5 * h)[0], 1.5);
  EXPECT_TRUE(f.compatible(a));
  EXPECT_FALSE(f.compatible(b));
  EXPECT_THROW(f += DiscreteField(b, 1.0), std::invalid_argument);
  EXPECT_THROW(DiscreteField(a, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(mean_value(b, f), std::invalid_argument);
  f[1] = NAN;
  EXPECT_FALSE(f.finite());
}

TEST(Norms, AgainstHandComputation) {
  const Mesh m = testmesh::interval({0.0, 1.0, 3.0, 6.0});
  const DiscreteField w(m, std::vector<double>{1.0, -2.0, 4.0});
  EXPECT_DOUBLE_EQ(integral(m, w), 1.0 - 4.0 + 12.0);
  EXPECT_DOUBLE_EQ(mean_value(m, w), 9.0 / 6.0);
  EXPECT_DOUBLE_EQ(max_norm(w), 4.0);
  EXPECT_DOUBLE_EQ(min_value(w), -2.0);
  EXPECT_NEAR(lebesgue_norm(m, w, 2.0), std::sqrt(1.0 + 8.0 + 48.0), 1e-14);
  // interior distances 1.5 and 2.5
  EXPECT_NEAR(discrete_seminorm(m, w, 2.0), std::sqrt(9.0 / 1.5 + 36.0 / 2.5), 1e-14);
}

TEST(Gradient, ExactForLinearFieldsOnUniformGrid) {
  const Mesh m = build_uniform_1d(0.0, 1.0, 10);
  DiscreteField w(m);
  for (std::size_t k = 0; k < m.num_cells(); ++k) w[k] = 3.0 * m.cell(k).center.x;
  const std::vector<Point> g = approximate_gradient(m, w);
  ASSERT_EQ(g.size(), m.num_edges());
  for (std::size_t e = 0; e < m.num_edges(); ++e)
    if (!m.edge(e).boundary()) EXPECT_NEAR(g[e].x, 3.0, 1e-12);
}

TEST(Pairings, DiscreteIntegrationByParts) {
  std::mt19937_64 rng(7);
  const Mesh m = testmesh::hexagon_fan(6, 0.05, rng);
  std::uniform_real_distribution<double> d(0.5, 2.0);
  DiscreteField a(m), z(m);
  for (std::size_t k = 0; k < m.num_cells(); ++k) {
    a[k] = d(rng);
    z[k] = d(rng);
  }
  // sum_K a_K sum_sigma tau D_{K,sigma} z = -sum_sigma tau D a D z
  EXPECT_NEAR(flux_pairing(m, a, z), -edge_pairing(m, a, z), 1e-12);
}

TEST(Projection, ExactForLowDegreePolynomials) {
  const Triangulation t = disk_mesh(1.0, 36);
  const Mesh m = build_from_triangulation(t.vertices, t.triangles);
  const DiscreteField p = project_cell_averages([](Point x) { return x.x * x.x + 2 * x.y; }, m);
  long double s = 0.0L;
  for (std::size_t k = 0; k < m.num_cells(); ++k) s += m.cell(k).volume * p[k];
  // integral of x^2 over the inscribed polygon with vertices on the unit circle
  const int n = 36;
  const double exact = n / 24.0 * std::sin(2 * std::numbers::pi / n) *
                       (2.0 + std::cos(2 * std::numbers::pi / n));
  EXPECT_NEAR(static_cast<double>(s), exact, 1e-12);
}
