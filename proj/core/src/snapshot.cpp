#include "chemofv/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace chemofv {

void write_cell_csv(std::ostream& out, const Mesh& mesh, const State& state) {
  state.u.require(mesh);
  state.v.require(mesh);
  const bool two_d = mesh.dimension() == 2;
  out << (two_d ? "cell,x,y,u,v\n" : "cell,x,u,v\n");
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Point c = mesh.cell(k).center;
    if (two_d)
      fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g}\n", k, c.x, c.y, state.u[k], state.v[k]);
    else
      fmt::print(out, "{},{:.17g},{:.17g},{:.17g}\n", k, c.x, state.u[k], state.v[k]);
  }
}

void write_vtk(std::ostream& out, const Mesh& mesh,
               const std::vector<std::pair<std::string, const DiscreteField*>>& fields,
               const std::string& title) {
  if (mesh.dimension() != 2 || mesh.triangles().size() != mesh.num_cells())
    throw std::invalid_argument("VTK output needs a triangulated 2D mesh");
  for (const auto& [name, f] : fields) {
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
      throw std::invalid_argument(fmt::format("bad VTK field name '{}'", name));
    f->require(mesh);
  }
  const auto& pts = mesh.vertices();
  const auto& tri = mesh.triangles();
  out << "# vtk DataFile Version 3.0\n" << title.substr(0, 255) << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  fmt::print(out, "POINTS {} double\n", pts.size());
  for (const Point& p : pts) fmt::print(out, "{:.17g} {:.17g} 0\n", p.x, p.y);
  fmt::print(out, "CELLS {} {}\n", tri.size(), 4 * tri.size());
  for (const auto& t : tri) fmt::print(out, "3 {} {} {}\n", t[0], t[1], t[2]);
  fmt::print(out, "CELL_TYPES {}\n", tri.size());
  for (std::size_t i = 0; i < tri.size(); ++i) out << "5\n";
  fmt::print(out, "CELL_DATA {}\n", tri.size());
  for (const auto& [name, f] : fields) {
    fmt::print(out, "SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
    for (double x : f->values()) fmt::print(out, "{:.17g}\n", x);
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range(fmt::format("no column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv_table(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  {
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw std::runtime_error(fmt::format("non-numeric CSV cell '{}'", cell));
      row.push_back(v);
    }
    if (row.size() != t.header.size())
      throw std::runtime_error(fmt::format("CSV row has {} cells, header has {}", row.size(),
                                           t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

SnapshotRecorder::SnapshotRecorder(std::filesystem::path dir, std::vector<double> times, bool vtk)
    : dir_(std::move(dir)), times_(std::move(times)), vtk_(vtk) {
  std::sort(times_.begin(), times_.end());
  times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
  if (!times_.empty() && times_.front() < 0.0)
    throw std::invalid_argument("snapshot times must be nonnegative");
}

std::string SnapshotRecorder::stem(double t) { return fmt::format("snapshot_t{:g}", t); }

void SnapshotRecorder::write(const Mesh& mesh, const State& s) {
  std::filesystem::create_directories(dir_);
  const std::string name = stem(times_[next_]);
  {
    const auto path = dir_ / (name + ".csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    write_cell_csv(f, mesh, s);
    written_.push_back(path);
  }
  if (vtk_ && mesh.dimension() == 2) {
    const auto path = dir_ / (name + ".vtk");
    std::ofstream f(path);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    write_vtk(f, mesh, {{"u", &s.u}, {"v", &s.v}}, fmt::format("t = {:.17g}", s.time));
    written_.push_back(path);
  }
  ++next_;
}

void SnapshotRecorder::start(const Mesh& mesh, const State& initial) {
  while (next_ < times_.size() && times_[next_] <= initial.time) write(mesh, initial);
}

Observer SnapshotRecorder::observer() {
  return [this](const StepEvent& ev) {
    while (next_ < times_.size() &&
           ev.current.time >= times_[next_] - 1e-9 * std::max(1.0, times_[next_]))
      write(ev.mesh, ev.current);
  };
}

}  // namespace chemofv
