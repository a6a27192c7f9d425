#include "chemofv/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

namespace chemofv {

namespace {

std::atomic<std::uint64_t> next_mesh_id{1};

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point circumcenter(Point a, Point b, Point c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

}  // namespace

Mesh::Mesh(int dimension, std::vector<Cell> cells, std::vector<Edge> edges,
           std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles)
    : dim_(dimension),
      cells_(std::move(cells)),
      edges_(std::move(edges)),
      vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      id_(next_mesh_id++) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("mesh dimension must be 1 or 2");
  const int n = static_cast<int>(cells_.size());
  if (n == 0) throw std::invalid_argument("mesh has no cells");

  std::vector<int> count(n, 0), n_int(n, 0);
  for (const Edge& e : edges_) {
    if (e.k < 0 || e.k >= n || e.l >= n || e.k == e.l)
      throw std::invalid_argument("edge incidence out of range");
    ++count[e.k];
    if (!e.boundary()) {
      ++count[e.l];
      ++n_int[e.k];
      ++n_int[e.l];
      ++n_interior_;
    }
  }
  offsets_.assign(n + 1, 0);
  for (int k = 0; k < n; ++k) offsets_[k + 1] = offsets_[k] + count[k];
  incidence_.assign(offsets_[n], -1);
  std::vector<int> fill_int(offsets_.begin(), offsets_.end() - 1);
  std::vector<int> fill_bnd(n);
  for (int k = 0; k < n; ++k) fill_bnd[k] = offsets_[k] + n_int[k];
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.boundary()) {
      incidence_[fill_bnd[ed.k]++] = e;
    } else {
      incidence_[fill_int[ed.k]++] = e;
      incidence_[fill_int[ed.l]++] = e;
    }
  }
  n_int_ = std::move(n_int);

  long double m = 0.0L;
  for (const Cell& c : cells_) {
    if (!(c.volume > 0.0)) throw std::invalid_argument("cell volume must be positive");
    m += c.volume;
    eta_ = std::max(eta_, c.diameter);
  }
  measure_ = static_cast<double>(m);
}

std::span<const int> Mesh::cell_edges(int k) const {
  return {incidence_.data() + offsets_[k], incidence_.data() + offsets_[k + 1]};
}

std::span<const int> Mesh::interior_edges(int k) const {
  return {incidence_.data() + offsets_[k], incidence_.data() + offsets_[k] + n_int_[k]};
}

std::span<const int> Mesh::boundary_edges(int k) const {
  return {incidence_.data() + offsets_[k] + n_int_[k], incidence_.data() + offsets_[k + 1]};
}

std::vector<int> Mesh::neighbors(int k) const {
  std::vector<int> out;
  for (int e : interior_edges(k)) out.push_back(edges_[e].other(k));
  return out;
}

bool Mesh::connected() const {
  const int n = static_cast<int>(num_cells());
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int k = q.front();
    q.pop();
    for (int e : interior_edges(k)) {
      const int l = edges_[e].other(k);
      if (!seen[l]) {
        seen[l] = 1;
        ++reached;
        q.push(l);
      }
    }
  }
  return reached == n;
}

DiscreteField::DiscreteField(const Mesh& mesh, double value)
    : mesh_id_(mesh.id()), values_(mesh.num_cells(), value) {}

DiscreteField::DiscreteField(const Mesh& mesh, std::vector<double> values)
    : mesh_id_(mesh.id()), values_(std::move(values)) {
  if (values_.size() != mesh.num_cells())
    throw std::invalid_argument(fmt::format("field has {} values for {} cells", values_.size(),
                                            mesh.num_cells()));
}

void DiscreteField::require(const Mesh& mesh) const {
  if (!compatible(mesh)) throw std::invalid_argument("field does not belong to this mesh");
}

bool DiscreteField::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

void DiscreteField::check_same(const DiscreteField& o) const {
  if (mesh_id_ != o.mesh_id_ || values_.size() != o.values_.size())
    throw std::invalid_argument("fields live on different meshes");
}

DiscreteField& DiscreteField::operator+=(const DiscreteField& o) {
  check_same(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

DiscreteField& DiscreteField::operator-=(const DiscreteField& o) {
  check_same(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

DiscreteField& DiscreteField::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

DiscreteField& DiscreteField::operator+=(double s) {
  for (double& x : values_) x += s;
  return *this;
}

DiscreteField operator+(DiscreteField a, const DiscreteField& b) { return a += b; }
DiscreteField operator-(DiscreteField a, const DiscreteField& b) { return a -= b; }
DiscreteField operator*(double s, DiscreteField a) { return a *= s; }

Mesh build_uniform_1d(double a, double b, int n_cells) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("non-finite bounds");
  if (!(a < b)) throw std::invalid_argument("need a < b");
  if (n_cells < 2) throw std::invalid_argument("need at least 2 cells");
  const double h = (b - a) / n_cells;
  std::vector<Cell> cells(n_cells);
  for (int k = 0; k < n_cells; ++k) cells[k] = {h, {a + (k + 0.5) * h, 0.0}, h};
  std::vector<Edge> edges;
  edges.reserve(n_cells + 1);
  for (int k = 0; k + 1 < n_cells; ++k) {
    Edge e;
    e.measure = 1.0;
    e.distance = h;
    e.transmissibility = 1.0 / h;
    e.k = k;
    e.l = k + 1;
    e.normal = {1.0, 0.0};
    e.midpoint = {a + (k + 1) * h, 0.0};
    e.dist_k = e.dist_l = 0.5 * h;
    e.diamond_volume = h;
    edges.push_back(e);
  }
  for (int side = 0; side < 2; ++side) {
    Edge e;
    e.measure = 1.0;
    e.distance = 0.5 * h;
    e.transmissibility = 2.0 / h;
    e.k = side == 0 ? 0 : n_cells - 1;
    e.normal = {side == 0 ? -1.0 : 1.0, 0.0};
    e.midpoint = {side == 0 ? a : b, 0.0};
    e.dist_k = 0.5 * h;
    e.diamond_volume = 0.5 * h;
    edges.push_back(e);
  }
  return Mesh(1, std::move(cells), std::move(edges));
}

Mesh build_from_triangulation(const std::vector<Point>& vertices,
                              const std::vector<std::array<int, 3>>& triangles) {
  if (triangles.empty()) throw std::invalid_argument("no triangles");
  const int nv = static_cast<int>(vertices.size());
  std::vector<Cell> cells(triangles.size());
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> by_edge;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int i : tri)
      if (i < 0 || i >= nv) throw std::invalid_argument("triangle vertex index out of range");
    const Point a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
    const double area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double scale = std::max({dist(a, b), dist(b, c), dist(c, a)});
    if (!(std::abs(area2) > 1e-12 * scale * scale))
      throw std::invalid_argument(fmt::format("degenerate triangle {}", t));
    cells[t] = {0.5 * std::abs(area2), circumcenter(a, b, c), scale};
    for (int i = 0; i < 3; ++i) {
      const int p = tri[i], q = tri[(i + 1) % 3];
      by_edge[{std::min(p, q), std::max(p, q)}].push_back({static_cast<int>(t), tri[(i + 2) % 3]});
    }
  }

  std::vector<Edge> edges;
  edges.reserve(by_edge.size());
  std::vector<int> boundary_degree(nv, 0);
  for (const auto& [key, owners] : by_edge) {
    if (owners.size() > 2)
      throw std::invalid_argument(
          fmt::format("non-conforming triangulation: edge ({}, {}) shared by {} triangles",
                      key.first, key.second, owners.size()));
    const Point p = vertices[key.first], q = vertices[key.second];
    Edge e;
    e.measure = dist(p, q);
    e.midpoint = {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
    Point nu{(q.y - p.y) / e.measure, -(q.x - p.x) / e.measure};
    const Point opp = vertices[owners[0].second];
    if ((opp.x - e.midpoint.x) * nu.x + (opp.y - e.midpoint.y) * nu.y > 0.0) nu = {-nu.x, -nu.y};
    e.normal = nu;
    e.k = owners[0].first;
    const Point xk = cells[e.k].center;
    e.dist_k = (e.midpoint.x - xk.x) * nu.x + (e.midpoint.y - xk.y) * nu.y;
    const double tol = 1e-12 * e.measure;
    if (owners.size() == 2) {
      e.l = owners[1].first;
      const Point xl = cells[e.l].center;
      e.dist_l = (xl.x - e.midpoint.x) * nu.x + (xl.y - e.midpoint.y) * nu.y;
      e.distance = e.dist_k + e.dist_l;
      if (!(e.distance > tol))
        throw std::invalid_argument(fmt::format(
            "degenerate transmissibility on edge ({}, {}) between cells {} and {}: d = {:g}",
            key.first, key.second, e.k, e.l, e.distance));
    } else {
      e.distance = std::abs(e.dist_k);
      if (!(e.distance > tol))
        throw std::invalid_argument(fmt::format(
            "degenerate transmissibility on boundary edge ({}, {}) of cell {}", key.first,
            key.second, e.k));
      ++boundary_degree[key.first];
      ++boundary_degree[key.second];
    }
    e.transmissibility = e.measure / e.distance;
    e.diamond_volume = 0.5 * e.measure * e.distance;
    edges.push_back(e);
  }
  for (int v = 0; v < nv; ++v)
    if (boundary_degree[v] != 0 && boundary_degree[v] != 2)
      throw std::invalid_argument(
          fmt::format("non-conforming triangulation: vertex {} has {} boundary edges", v,
                      boundary_degree[v]));
  return Mesh(2, std::move(cells), std::move(edges), vertices, triangles);
}

AdmissibilityReport check_admissibility(const Mesh& mesh, double zeta) {
  AdmissibilityReport r;
  r.worst_ratio = INFINITY;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& ed = mesh.edge(e);
    const double rk = ed.dist_k / ed.distance;
    r.worst_ratio = std::min(r.worst_ratio, rk);
    if (!(rk >= zeta)) r.offending_edges.push_back({ed.k, e});
    if (!ed.boundary()) {
      const double rl = ed.dist_l / ed.distance;
      r.worst_ratio = std::min(r.worst_ratio, rl);
      if (!(rl >= zeta)) r.offending_edges.push_back({ed.l, e});
    }
  }
  r.ok = r.offending_edges.empty();
  return r;
}

double integral(const Mesh& mesh, const DiscreteField& w) {
  w.require(mesh);
  long double s = 0.0L;
  for (std::size_t k = 0; k < w.size(); ++k)
    s += static_cast<long double>(mesh.cell(k).volume) * w[k];
  return static_cast<double>(s);
}

double mean_value(const Mesh& mesh, const DiscreteField& w) {
  return integral(mesh, w) / mesh.measure();
}

double discrete_seminorm(const Mesh& mesh, const DiscreteField& w, double q) {
  w.require(mesh);
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  long double s = 0.0L;
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double diff = std::abs(w[e.l] - w[e.k]);
    s += e.measure * e.distance * std::pow(diff / e.distance, q);
  }
  return std::pow(static_cast<double>(s), 1.0 / q);
}

double lebesgue_norm(const Mesh& mesh, const DiscreteField& w, double q) {
  w.require(mesh);
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  long double s = 0.0L;
  for (std::size_t k = 0; k < w.size(); ++k)
    s += mesh.cell(k).volume * std::pow(std::abs(w[k]), q);
  return std::pow(static_cast<double>(s), 1.0 / q);
}

double max_norm(const DiscreteField& w) {
  double m = 0.0;
  for (double x : w.values()) m = std::max(m, std::abs(x));
  return m;
}

double min_value(const DiscreteField& w) {
  return *std::min_element(w.values().begin(), w.values().end());
}

std::vector<Point> approximate_gradient(const Mesh& mesh, const DiscreteField& w) {
  w.require(mesh);
  std::vector<Point> g(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    if (ed.boundary()) continue;
    const double s = ed.measure / ed.diamond_volume * (w[ed.l] - w[ed.k]);
    g[e] = {s * ed.normal.x, s * ed.normal.y};
  }
  return g;
}

double flux_pairing(const Mesh& mesh, const DiscreteField& a, const DiscreteField& z) {
  a.require(mesh);
  z.require(mesh);
  long double s = 0.0L;
  for (int k = 0; k < static_cast<int>(mesh.num_cells()); ++k) {
    long double flux = 0.0L;
    for (int e : mesh.interior_edges(k)) {
      const Edge& ed = mesh.edge(e);
      flux += ed.transmissibility * (z[ed.other(k)] - z[k]);
    }
    s += a[k] * flux;
  }
  return static_cast<double>(s);
}

double edge_pairing(const Mesh& mesh, const DiscreteField& a, const DiscreteField& z) {
  a.require(mesh);
  z.require(mesh);
  long double s = 0.0L;
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    s += e.transmissibility * (a[e.l] - a[e.k]) * (z[e.l] - z[e.k]);
  }
  return static_cast<double>(s);
}

}  // namespace chemofv
