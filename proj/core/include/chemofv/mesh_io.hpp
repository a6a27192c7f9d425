#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "chemofv/mesh.hpp"

namespace chemofv {

struct Triangulation {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  /// Element type -> number of elements skipped.
  std::map<int, int> ignored;
};

/// Reads a Gmsh MSH 2.2 ASCII file. Only 3-node triangles (type 2) are kept.
Triangulation load_gmsh(const std::filesystem::path& path);
Triangulation read_gmsh(std::istream& in);
void write_gmsh(const std::filesystem::path& path, const std::vector<Point>& vertices,
                const std::vector<std::array<int, 3>>& triangles);

/// Plain-text listing of cells and edges with full precision.
void write_mesh_dump(std::ostream& out, const Mesh& mesh);

}  // namespace chemofv
