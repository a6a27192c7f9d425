#include "chemofv/mesh_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace chemofv {

namespace {

std::string next_line(std::istream& in, const char* where) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(fmt::format("malformed {} section", where));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect(std::istream& in, const std::string& tag, const char* where) {
  const std::string line = next_line(in, where);
  if (line != tag)
    throw std::runtime_error(fmt::format("malformed {} section: expected {}, got '{}'", where, tag, line));
}

}  // namespace

Triangulation read_gmsh(std::istream& in) {
  Triangulation out;
  std::unordered_map<long, int> node_index;
  bool have_format = false, have_nodes = false, have_elements = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      std::istringstream ss(next_line(in, "$MeshFormat"));
      std::string version;
      int file_type = -1, data_size = 0;
      if (!(ss >> version >> file_type >> data_size))
        throw std::runtime_error("malformed $MeshFormat section");
      if (version.rfind("2.", 0) != 0)
        throw std::runtime_error(fmt::format("unsupported MSH version {}", version));
      if (file_type != 0) throw std::runtime_error("only ASCII MSH files are supported");
      expect(in, "$EndMeshFormat", "$MeshFormat");
      have_format = true;
    } else if (line == "$Nodes") {
      if (!have_format) throw std::runtime_error("$Nodes before $MeshFormat");
      long n = 0;
      if (!(std::istringstream(next_line(in, "$Nodes")) >> n) || n < 0)
        throw std::runtime_error("malformed $Nodes section");
      out.vertices.reserve(n);
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(next_line(in, "$Nodes"));
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) throw std::runtime_error("malformed $Nodes section");
        node_index[id] = static_cast<int>(out.vertices.size());
        out.vertices.push_back({x, y});
      }
      expect(in, "$EndNodes", "$Nodes");
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_nodes) throw std::runtime_error("$Elements before $Nodes");
      long n = 0;
      if (!(std::istringstream(next_line(in, "$Elements")) >> n) || n < 0)
        throw std::runtime_error("malformed $Elements section");
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(next_line(in, "$Elements"));
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags) || ntags < 0)
          throw std::runtime_error("malformed $Elements section");
        for (int t = 0; t < ntags; ++t) {
          long tag;
          if (!(ss >> tag)) throw std::runtime_error("malformed $Elements section");
        }
        if (type != 2) {
          ++out.ignored[type];
          continue;
        }
        std::array<int, 3> tri{};
        for (int& v : tri) {
          long node;
          if (!(ss >> node)) throw std::runtime_error("malformed $Elements section");
          auto it = node_index.find(node);
          if (it == node_index.end())
            throw std::runtime_error(fmt::format("element {} references unknown node {}", id, node));
          v = it->second;
        }
        out.triangles.push_back(tri);
      }
      expect(in, "$EndElements", "$Elements");
      have_elements = true;
    } else if (line.front() == '$') {
      const std::string end = "$End" + line.substr(1);
      while (next_line(in, line.c_str()) != end) {
      }
    }
  }
  if (!have_format) throw std::runtime_error("missing $MeshFormat section");
  if (!have_elements || out.triangles.empty()) throw std::runtime_error("no triangles found");
  return out;
}

Triangulation load_gmsh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  return read_gmsh(in);
}

void write_gmsh(const std::filesystem::path& path, const std::vector<Point>& vertices,
                const std::vector<std::array<int, 3>>& triangles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  fmt::print(out, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n{}\n", vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i)
    fmt::print(out, "{} {:.17g} {:.17g} 0\n", i + 1, vertices[i].x, vertices[i].y);
  fmt::print(out, "$EndNodes\n$Elements\n{}\n", triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t)
    fmt::print(out, "{} 2 2 1 1 {} {} {}\n", t + 1, triangles[t][0] + 1, triangles[t][1] + 1,
               triangles[t][2] + 1);
  fmt::print(out, "$EndElements\n");
}

void write_mesh_dump(std::ostream& out, const Mesh& mesh) {
  fmt::print(out, "dimension {}\ncells {}\n", mesh.dimension(), mesh.num_cells());
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    fmt::print(out, "{} {:.17g} {:.17g} {:.17g}\n", k, c.volume, c.center.x, c.center.y);
  }
  fmt::print(out, "edges {}\n", mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    fmt::print(out, "{} {} {} {:.17g} {:.17g} {:.17g}\n", e, ed.k, ed.l, ed.measure, ed.distance,
               ed.transmissibility);
  }
}

}  // namespace chemofv
