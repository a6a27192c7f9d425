#pragma once

// Dense reference computations written out by hand, independent of Eigen's solvers.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chemofv/mesh.hpp"
#include "chemofv/scheme.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t n, std::size_t m) { return Dense(n, std::vector<double>(m, 0.0)); }

/// Gaussian elimination with partial pivoting in long double.
inline std::vector<double> gauss_solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n] = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
    if (m[p][c] == 0.0L) throw std::runtime_error("singular matrix");
    std::swap(m[p], m[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = m[r][c] / m[c][c];
      if (f == 0.0L) continue;
      for (std::size_t j = c; j <= n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = static_cast<double>(s / m[i][i]);
  }
  return x;
}

/// TPFA stiffness matrix assembled edge by edge.
inline Dense stiffness(const chemofv::Mesh& mesh) {
  Dense s = zeros(mesh.num_cells(), mesh.num_cells());
  for (const auto& e : mesh.edges()) {
    if (e.boundary()) continue;
    s[e.k][e.k] += e.transmissibility;
    s[e.l][e.l] += e.transmissibility;
    s[e.k][e.l] -= e.transmissibility;
    s[e.l][e.k] -= e.transmissibility;
  }
  return s;
}

/// Zero-mean z with S z = m w through the Lagrange system [S m; m^T 0].
inline std::vector<double> constrained_poisson(const chemofv::Mesh& mesh,
                                               const std::vector<double>& w) {
  const std::size_t n = mesh.num_cells();
  Dense a = zeros(n + 1, n + 1);
  const Dense s = stiffness(mesh);
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = s[i][j];
    a[i][n] = mesh.cell(i).volume;
    a[n][i] = mesh.cell(i).volume;
    b[i] = mesh.cell(i).volume * w[i];
  }
  std::vector<double> x = gauss_solve(a, b);
  x.pop_back();
  return x;
}

inline double seminorm_sq(const chemofv::Mesh& mesh, const std::vector<double>& z) {
  long double s = 0.0L;
  for (const auto& e : mesh.edges())
    if (!e.boundary()) s += e.transmissibility * (z[e.l] - z[e.k]) * (z[e.l] - z[e.k]);
  return static_cast<double>(s);
}

inline double dual_norm(const chemofv::Mesh& mesh, const std::vector<double>& w) {
  return std::sqrt(seminorm_sq(mesh, constrained_poisson(mesh, w)));
}

/// One step of the scheme with dense matrices written from the definitions.
inline chemofv::State step(const chemofv::Mesh& mesh, const chemofv::SchemeParams& p,
                           const chemofv::State& s, double dt) {
  const std::size_t n = mesh.num_cells();
  Dense mv = zeros(n, n), mu = zeros(n, n);
  std::vector<double> bv(n), bu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = mesh.cell(k).volume;
    mv[k][k] = m * (p.epsilon + dt * p.beta);
    bv[k] = m * (p.epsilon * s.v[k] + dt * s.u[k]);
    bu[k] = m * s.u[k];
  }
  for (const auto& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double t = p.delta * dt * e.transmissibility;
    mv[e.k][e.k] += t;
    mv[e.l][e.l] += t;
    mv[e.k][e.l] -= t;
    mv[e.l][e.k] -= t;
  }
  const std::vector<double> v = gauss_solve(mv, bv);
  for (std::size_t k = 0; k < n; ++k) mu[k][k] = mesh.cell(k).volume;
  for (const auto& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double t = dt * e.transmissibility;
    const double gk = p.motility(v[e.k]), gl = p.motility(v[e.l]);
    mu[e.k][e.k] += t * gk;
    mu[e.l][e.l] += t * gl;
    mu[e.k][e.l] -= t * gl;
    mu[e.l][e.k] -= t * gk;
  }
  const std::vector<double> u = gauss_solve(mu, bu);
  chemofv::State out;
  out.u = chemofv::DiscreteField(mesh, u);
  out.v = chemofv::DiscreteField(mesh, v);
  out.step = s.step + 1;
  out.time = s.time + dt;
  return out;
}

}  // namespace oracle
