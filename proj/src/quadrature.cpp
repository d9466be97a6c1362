#include "vmfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "vmfem/errors.hpp"

namespace vmfem {

GaussRule1D gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw InvalidArgument("Gauss-Jacobi rule needs at least one point");
  if (alpha <= -1.0 || beta <= -1.0) throw InvalidArgument("Gauss-Jacobi exponents must exceed -1");

  // Symmetric Jacobi matrix of the three-term recurrence.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int i = 0; i < n; ++i) {
    const double two_i_ab = 2.0 * i + ab;
    if (i == 0)
      J(0, 0) = (beta - alpha) / (ab + 2.0);
    else
      J(i, i) = (beta * beta - alpha * alpha) / (two_i_ab * (two_i_ab + 2.0));
    if (i + 1 < n) {
      const double m = i + 1.0;
      const double t = 2.0 * m + ab;
      const double num = 4.0 * m * (m + alpha) * (m + beta) * (m + ab);
      const double den = t * t * (t + 1.0) * (t - 1.0);
      J(i, i + 1) = J(i + 1, i) = std::sqrt(num / den);
    }
  }
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  GaussRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw InvalidArgument("quadrature degree must be non-negative");
  const int n = std::max(1, (degree + 2) / 2);
  const GaussRule1D gl = gauss_jacobi(n, 0.0, 0.0);
  const GaussRule1D gj = gauss_jacobi(n, 1.0, 0.0);

  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = gl.nodes[i];
      const double b = gj.nodes[j];
      rule.points.emplace_back(0.25 * (1.0 + a) * (1.0 - b), 0.5 * (1.0 + b));
      rule.weights.push_back(gl.weights[i] * gj.weights[j] / 8.0);
    }
  return rule;
}

EdgeRule edge_rule(int degree) {
  if (degree < 0) throw InvalidArgument("quadrature degree must be non-negative");
  const int n = std::max(1, (degree + 2) / 2);
  const GaussRule1D gl = gauss_jacobi(n, 0.0, 0.0);
  EdgeRule rule;
  rule.degree = degree;
  // Sort so the points run along the edge.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return gl.nodes[a] < gl.nodes[b]; });
  for (int i : order) {
    rule.points.push_back(0.5 * (gl.nodes[i] + 1.0));
    rule.weights.push_back(0.5 * gl.weights[i]);
  }
  return rule;
}

} // namespace vmfem
