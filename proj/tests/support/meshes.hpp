#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "chemofv/mesh.hpp"

namespace testmesh {

/// 1D mesh with the given nodes, cell centers at midpoints.
inline chemofv::Mesh interval(const std::vector<double>& x) {
  using namespace chemofv;
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<Cell> cells(n);
  for (int k = 0; k < n; ++k) {
    const double h = x[k + 1] - x[k];
    cells[k] = {h, {0.5 * (x[k] + x[k + 1]), 0.0}, h};
  }
  std::vector<Edge> edges;
  for (int k = 0; k + 1 < n; ++k) {
    Edge e;
    e.measure = 1.0;
    e.dist_k = 0.5 * cells[k].volume;
    e.dist_l = 0.5 * cells[k + 1].volume;
    e.distance = e.dist_k + e.dist_l;
    e.transmissibility = 1.0 / e.distance;
    e.k = k;
    e.l = k + 1;
    e.normal = {1.0, 0.0};
    e.midpoint = {x[k + 1], 0.0};
    e.diamond_volume = e.distance;
    edges.push_back(e);
  }
  for (int side = 0; side < 2; ++side) {
    Edge e;
    e.k = side == 0 ? 0 : n - 1;
    e.measure = 1.0;
    e.distance = e.dist_k = 0.5 * cells[e.k].volume;
    e.transmissibility = 1.0 / e.distance;
    e.normal = {side == 0 ? -1.0 : 1.0, 0.0};
    e.midpoint = {side == 0 ? x.front() : x.back(), 0.0};
    e.diamond_volume = e.distance;
    edges.push_back(e);
  }
  return Mesh(1, std::move(cells), std::move(edges));
}

inline std::vector<double> random_nodes(int cells, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> h(0.2, 1.0);
  std::vector<double> x{0.0};
  for (int k = 0; k < cells; ++k) x.push_back(x.back() + h(rng));
  return x;
}

/// The first `count` triangles (1 to 6) of a hexagon fan, with the outer vertices jittered.
inline chemofv::Mesh hexagon_fan(int count, double jitter, std::mt19937_64& rng) {
  using chemofv::Point;
  std::uniform_real_distribution<double> d(-jitter, jitter);
  std::vector<Point> v{{d(rng), d(rng)}};
  for (int i = 0; i < 6; ++i) {
    const double a = i * std::numbers::pi / 3.0;
    v.push_back({std::cos(a) + d(rng), std::sin(a) + d(rng)});
  }
  std::vector<std::array<int, 3>> t;
  for (int i = 0; i < count; ++i) t.push_back({0, 1 + i, 1 + (i + 1) % 6});
  return chemofv::build_from_triangulation(v, t);
}

/// A row of `count` alternating equilateral triangles.
inline chemofv::Mesh strip(int count) {
  using chemofv::Point;
  const double hgt = std::sqrt(3.0) / 2.0;
  std::vector<Point> v;
  const int top = count / 2 + 1;
  for (int i = 0; i <= top; ++i) v.push_back({static_cast<double>(i), 0.0});
  for (int i = 0; i <= top; ++i) v.push_back({i + 0.5, hgt});
  const int b = 0, u = top + 1;
  std::vector<std::array<int, 3>> t;
  for (int i = 0; static_cast<int>(t.size()) < count; ++i) {
    t.push_back({b + i, b + i + 1, u + i});
    if (static_cast<int>(t.size()) < count) t.push_back({b + i + 1, u + i + 1, u + i});
  }
  return chemofv::build_from_triangulation(v, t);
}

}  // namespace testmesh
