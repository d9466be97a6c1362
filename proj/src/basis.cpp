#include "vmfem/basis.hpp"

#include <cmath>

#include "vmfem/errors.hpp"

namespace vmfem {

namespace {

const Point kVertices[3] = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

} // namespace

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1) throw InvalidArgument("Lagrange degree must be >= 1");
  const int k = degree;

  for (int i = 0; i < 3; ++i) nodes_.push_back({kVertices[i], NodeKind::Vertex, i, 0});
  for (int f = 0; f < 3; ++f) {
    const Point a = kVertices[f];
    const Point b = kVertices[(f + 1) % 3];
    for (int j = 1; j < k; ++j)
      nodes_.push_back({a + (b - a) * (static_cast<double>(j) / k), NodeKind::Edge, f, j - 1});
  }
  int interior = 0;
  for (int j = 1; j < k; ++j)
    for (int i = 1; i + j < k; ++i)
      nodes_.push_back({Point(static_cast<double>(i) / k, static_cast<double>(j) / k),
                        NodeKind::Interior, -1, interior++});

  for (int total = 0; total <= k; ++total)
    for (int b = 0; b <= total; ++b) exponents_.emplace_back(total - b, b);

  const int n = size();
  Eigen::MatrixXd vandermonde(n, n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      vandermonde(i, m) =
          ipow(nodes_[i].point.x(), exponents_[m].first) * ipow(nodes_[i].point.y(), exponents_[m].second);
  coefficients_ = vandermonde.fullPivLu().inverse();
}

Eigen::VectorXd LagrangeBasis::values(const Point& ref) const {
  const int n = size();
  Eigen::VectorXd mono(n);
  for (int m = 0; m < n; ++m)
    mono(m) = ipow(ref.x(), exponents_[m].first) * ipow(ref.y(), exponents_[m].second);
  return coefficients_.transpose() * mono;
}

Eigen::MatrixX2d LagrangeBasis::gradients(const Point& ref) const {
  const int n = size();
  Eigen::MatrixX2d dmono(n, 2);
  for (int m = 0; m < n; ++m) {
    const auto [a, b] = exponents_[m];
    dmono(m, 0) = a > 0 ? a * ipow(ref.x(), a - 1) * ipow(ref.y(), b) : 0.0;
    dmono(m, 1) = b > 0 ? b * ipow(ref.x(), a) * ipow(ref.y(), b - 1) : 0.0;
  }
  return coefficients_.transpose() * dmono;
}

} // namespace vmfem
