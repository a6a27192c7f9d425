#pragma once

#include <functional>
#include <vector>

#include "chemofv/mesh.hpp"

namespace chemofv {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [-1, 1].
QuadratureRule gauss_legendre(int n);

struct TriangleRule {
  std::vector<Point> points;  ///< barycentric-free reference coordinates (s, t), s + t <= 1
  std::vector<double> weights;  ///< sum to 1/2
};

/// Collapsed tensor rule on the reference triangle, exact for total degree `order`.
TriangleRule triangle_rule(int order);

using ScalarFunction = std::function<double(Point)>;

/// Cell averages of f, exact for polynomials up to `quadrature_order`.
DiscreteField project_cell_averages(const ScalarFunction& f, const Mesh& mesh,
                                    int quadrature_order = 4);

}  // namespace chemofv
