#pragma once

#include <array>
#include <vector>

#include "chemofv/mesh_io.hpp"

namespace chemofv {

/// Bowyer-Watson Delaunay triangulation of a point set, counter-clockwise triangles.
std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& points);

/// Acute triangulation of [0, edge]^2 with n vertex rows; 2 n^2 triangles. n even, n >= 8.
Triangulation square_mesh(double edge, int n);

/// Acute triangulation of the regular polygon with `boundary_vertices` corners inscribed in
/// the circle of given radius. boundary_vertices must be a multiple of 6, at least 12.
Triangulation disk_mesh(double radius, int boundary_vertices, int smoothing_sweeps = 50);

/// Largest interior angle of a triangulation, in degrees.
double max_angle_degrees(const Triangulation& t);

}  // namespace chemofv
