#include "chemofv/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace chemofv {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one point");
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

TriangleRule triangle_rule(int order) {
  const int n = std::max(1, (order + 3) / 2);
  const QuadratureRule g = gauss_legendre(n);
  TriangleRule r;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 * (g.nodes[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double b = 0.5 * (g.nodes[j] + 1.0);
      r.points.push_back({a, b * (1.0 - a)});
      r.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - a));
    }
  }
  return r;
}

DiscreteField project_cell_averages(const ScalarFunction& f, const Mesh& mesh,
                                    int quadrature_order) {
  if (quadrature_order < 0) throw std::invalid_argument("negative quadrature order");
  DiscreteField out(mesh);
  auto sample = [&](Point p) {
    const double v = f(p);
    if (!std::isfinite(v)) throw std::domain_error("non-finite sample in projection");
    return v;
  };
  if (mesh.dimension() == 1) {
    const QuadratureRule g = gauss_legendre(std::max(1, (quadrature_order + 2) / 2));
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
      const Cell& c = mesh.cell(k);
      long double s = 0.0L;
      for (std::size_t q = 0; q < g.nodes.size(); ++q)
        s += g.weights[q] * sample({c.center.x + 0.5 * c.volume * g.nodes[q], 0.0});
      out[k] = static_cast<double>(0.5L * s);
    }
    return out;
  }
  if (mesh.triangles().size() != mesh.num_cells())
    throw std::invalid_argument("projection needs the triangle list of a 2D mesh");
  const TriangleRule t = triangle_rule(quadrature_order);
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const auto& tri = mesh.triangles()[k];
    const Point a = mesh.vertices()[tri[0]], b = mesh.vertices()[tri[1]],
                c = mesh.vertices()[tri[2]];
    long double s = 0.0L;
    for (std::size_t q = 0; q < t.points.size(); ++q) {
      const double u = t.points[q].x, v = t.points[q].y;
      s += t.weights[q] * sample({a.x + u * (b.x - a.x) + v * (c.x - a.x),
                                  a.y + u * (b.y - a.y) + v * (c.y - a.y)});
    }
    out[k] = static_cast<double>(2.0L * s);
  }
  return out;
}

}  // namespace chemofv
