#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace chemofv {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Cell {
  double volume = 0.0;
  Point center;
  double diameter = 0.0;
};

/// Face of the primal mesh. In 1D an edge is a point and its measure is 1.
struct Edge {
  double measure = 0.0;
  double distance = 0.0;
  double transmissibility = 0.0;
  int k = -1;
  int l = -1;  ///< -1 on the boundary
  Point normal;  ///< unit normal pointing out of k
  Point midpoint;
  /// Signed distance from x_k (resp. x_l) to the edge line, positive on the cell side.
  double dist_k = 0.0;
  double dist_l = 0.0;
  double diamond_volume = 0.0;

  bool boundary() const { return l < 0; }
  int other(int cell) const { return cell == k ? l : k; }
};

class Mesh {
 public:
  Mesh(int dimension, std::vector<Cell> cells, std::vector<Edge> edges,
       std::vector<Point> vertices = {},
       std::vector<std::array<int, 3>> triangles = {});

  int dimension() const { return dim_; }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_interior_edges() const { return n_interior_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Cell& cell(int k) const { return cells_[k]; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Edge indices of cell k, interior edges first.
  std::span<const int> cell_edges(int k) const;
  std::span<const int> interior_edges(int k) const;
  std::span<const int> boundary_edges(int k) const;
  std::vector<int> neighbors(int k) const;

  double size() const { return eta_; }
  double measure() const { return measure_; }
  bool connected() const;

  /// Unique per constructed mesh; copies share it.
  std::uint64_t id() const { return id_; }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

 private:
  int dim_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> offsets_;
  std::vector<int> n_int_;
  std::vector<int> incidence_;
  std::size_t n_interior_ = 0;
  double eta_ = 0.0;
  double measure_ = 0.0;
  std::uint64_t id_;
};

class DiscreteField {
 public:
  DiscreteField() = default;
  explicit DiscreteField(const Mesh& mesh, double value = 0.0);
  DiscreteField(const Mesh& mesh, std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::uint64_t mesh_id() const { return mesh_id_; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  bool compatible(const Mesh& mesh) const {
    return mesh_id_ == mesh.id() && values_.size() == mesh.num_cells();
  }
  void require(const Mesh& mesh) const;
  bool finite() const;

  DiscreteField& operator+=(const DiscreteField& o);
  DiscreteField& operator-=(const DiscreteField& o);
  DiscreteField& operator*=(double s);
  DiscreteField& operator+=(double s);

 private:
  void check_same(const DiscreteField& o) const;
  std::uint64_t mesh_id_ = 0;
  std::vector<double> values_;
};

DiscreteField operator+(DiscreteField a, const DiscreteField& b);
DiscreteField operator-(DiscreteField a, const DiscreteField& b);
DiscreteField operator*(double s, DiscreteField a);

Mesh build_uniform_1d(double a, double b, int n_cells);
Mesh build_from_triangulation(const std::vector<Point>& vertices,
                              const std::vector<std::array<int, 3>>& triangles);

struct AdmissibilityReport {
  bool ok = true;
  double worst_ratio = 0.0;
  /// (cell, edge) pairs failing the bound.
  std::vector<std::pair<int, int>> offending_edges;
};

/// Checks dist(x_K, sigma) >= zeta d_sigma with the distance signed, so a
/// center on the far side of its own edge gives a negative ratio.
AdmissibilityReport check_admissibility(const Mesh& mesh, double zeta);

double mean_value(const Mesh& mesh, const DiscreteField& w);
double integral(const Mesh& mesh, const DiscreteField& w);
double discrete_seminorm(const Mesh& mesh, const DiscreteField& w, double q);
double lebesgue_norm(const Mesh& mesh, const DiscreteField& w, double q);
double max_norm(const DiscreteField& w);
double min_value(const DiscreteField& w);

/// One vector per edge: the constant value of the approximate gradient on its diamond.
std::vector<Point> approximate_gradient(const Mesh& mesh, const DiscreteField& w);

/// Sum over K of a_K sum_{sigma in E_K} tau D_{K,sigma} z.
double flux_pairing(const Mesh& mesh, const DiscreteField& a, const DiscreteField& z);
/// Sum over interior edges of tau D a D z.
double edge_pairing(const Mesh& mesh, const DiscreteField& a, const DiscreteField& z);

}  // namespace chemofv
