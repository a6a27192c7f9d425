#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "chemofv/experiments.hpp"
#include "chemofv/generators.hpp"

using namespace chemofv;

namespace {

double total_area(const Triangulation& t) {
  double s = 0.0;
  for (const auto& tri : t.triangles) {
    const Point a = t.vertices[tri[0]], b = t.vertices[tri[1]], c = t.vertices[tri[2]];
    const double area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    EXPECT_GT(area2, 0.0) << "clockwise triangle";
    s += 0.5 * area2;
  }
  return s;
}

}  // namespace

class DiskSizes : public ::testing::TestWithParam<int> {};

TEST_P(DiskSizes, AcuteAndAdmissible) {
  const int n = GetParam();
  const Triangulation t = disk_mesh(1.0, n);
  const int rings = n / 6;
  EXPECT_EQ(t.triangles.size(), static_cast<std::size_t>(6 * rings * rings));
  EXPECT_LT(max_angle_degrees(t), 90.0);
  const double polygon = 0.5 * n * std::sin(2.0 * std::numbers::pi / n);
  EXPECT_NEAR(total_area(t), polygon, 1e-12);
  const Mesh m = build_from_triangulation(t.vertices, t.triangles);
  EXPECT_TRUE(m.connected());
  EXPECT_TRUE(check_admissibility(m, kMinZeta).ok);
}

INSTANTIATE_TEST_SUITE_P(Generators, DiskSizes, ::testing::Values(12, 36, 60, 96));

TEST(SquareMesh, AcuteAndCoversTheSquare) {
  for (int n : {8, 12, 20}) {
    const Triangulation t = square_mesh(10.0, n);
    EXPECT_EQ(t.triangles.size(), static_cast<std::size_t>(2 * n * n));
    EXPECT_LT(max_angle_degrees(t), 80.0);
    EXPECT_NEAR(total_area(t), 100.0, 1e-10);
    for (const Point& p : t.vertices) {
      EXPECT_GE(p.x, -1e-12);
      EXPECT_LE(p.x, 10.0 + 1e-12);
      EXPECT_GE(p.y, -1e-12);
      EXPECT_LE(p.y, 10.0 + 1e-12);
    }
    const Mesh m = build_from_triangulation(t.vertices, t.triangles);
    EXPECT_TRUE(check_admissibility(m, kMinZeta).ok);
  }
}

TEST(Generators, RejectBadArguments) {
  EXPECT_THROW(disk_mesh(1.0, 13), std::invalid_argument);
  EXPECT_THROW(disk_mesh(1.0, 6), std::invalid_argument);
  EXPECT_THROW(disk_mesh(-1.0, 12), std::invalid_argument);
  EXPECT_THROW(square_mesh(1.0, 7), std::invalid_argument);
  EXPECT_THROW(square_mesh(0.0, 8), std::invalid_argument);
}

TEST(Delaunay, EmptyCircumcircles) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<Point> p;
  for (int i = 0; i < 60; ++i) p.push_back({d(rng), d(rng)});
  const auto tris = delaunay(p);
  ASSERT_FALSE(tris.empty());
  // brute-force in-circle predicate on every triangle against every point
  for (const auto& t : tris) {
    const Point a = p[t[0]], b = p[t[1]], c = p[t[2]];
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (static_cast<int>(i) == t[0] || static_cast<int>(i) == t[1] || static_cast<int>(i) == t[2])
        continue;
      const double ax = a.x - p[i].x, ay = a.y - p[i].y, bx = b.x - p[i].x, by = b.y - p[i].y,
                   cx = c.x - p[i].x, cy = c.y - p[i].y;
      const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                         (bx * bx + by * by) * (ax * cy - cx * ay) +
                         (cx * cx + cy * cy) * (ax * by - bx * ay);
      EXPECT_LE(det, 1e-12);
    }
  }
  // the triangles tile the convex hull: Euler count 2n - 2 - h
  std::set<int> used;
  for (const auto& t : tris) used.insert(t.begin(), t.end());
  EXPECT_EQ(used.size(), p.size());
}
