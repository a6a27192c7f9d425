#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "chemofv/simulation.hpp"

namespace chemofv {

/// One row per cell: cell, x, [y], u, v.
void write_cell_csv(std::ostream& out, const Mesh& mesh, const State& state);

/// Legacy ASCII VTK unstructured grid with one scalar per triangle and field. 2D meshes only.
void write_vtk(std::ostream& out, const Mesh& mesh,
               const std::vector<std::pair<std::string, const DiscreteField*>>& fields,
               const std::string& title = "chemofv");

/// Numeric CSV as written by this library: a header line, then rows of numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};
CsvTable read_csv_table(std::istream& in);

/// Writes cell CSV (and VTK in 2D) snapshots the first time the run reaches each requested time.
class SnapshotRecorder {
 public:
  SnapshotRecorder(std::filesystem::path dir, std::vector<double> times, bool vtk = true);

  /// Writes the initial state if time 0 was requested.
  void start(const Mesh& mesh, const State& initial);
  Observer observer();
  const std::vector<std::filesystem::path>& written() const { return written_; }

  static std::string stem(double t);

 private:
  void write(const Mesh& mesh, const State& s);

  std::filesystem::path dir_;
  std::vector<double> times_;
  std::size_t next_ = 0;
  bool vtk_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace chemofv
