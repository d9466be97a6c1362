#pragma once

#include <array>
#include <vector>

#include "vmfem/mesh.hpp"

namespace vmfem {

/// Gauss-Jacobi nodes and weights on [-1, 1] for the weight
/// (1 - x)^alpha (1 + x)^beta, computed with the Golub-Welsch algorithm.
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule1D gauss_jacobi(int n, double alpha, double beta);

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
  /// Barycentric coordinates (1 - x - y, x, y) of point i.
  std::array<double, 3> barycentric(std::size_t i) const {
    return {1.0 - points[i].x() - points[i].y(), points[i].x(), points[i].y()};
  }
};

/// Rule on the unit interval; weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Collapsed-coordinate (Duffy) product of Gauss-Legendre and Gauss-Jacobi(1,0)
/// rules, exact for polynomials of total degree <= `degree`. Positive weights.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0, 1] exact to `degree`.
EdgeRule edge_rule(int degree);

} // namespace vmfem
