#pragma once

// Field evaluation and test-function scatter shared by the local kernels.

#include "vmfem/detail/mixed_assembler.hpp"
#include "vmfem/tensor.hpp"

namespace vmfem::detail {

/// Basis data of both spaces at one point.
struct PointBasis {
  int ns = 0, nv = 0;
  const double* phi_s = nullptr;
  const double* phi_v = nullptr;
  PhysGrad grad_s, grad_v;
};

template <class S>
struct PointFields {
  S a{}; ///< density or pressure
  Vec2<S> grad_a{};
  Vec2<S> u{};
  Mat2<S> grad_u{}; ///< (i, j) = d u_i / d x_j
  S T{};
  Vec2<S> grad_T{};
};

/// Evaluates [A | u_x | u_y | T] local coefficients; Dual seeds start at `seed`.
template <class S>
PointFields<S> eval_fields(const double* x, const PointBasis& b, int seed) {
  using Sd = Seeder<S>;
  const int ns = b.ns, nv = b.nv;
  const int ou = ns, ov = ns + nv, oT = ns + 2 * nv;
  PointFields<S> f;
  f.a = Sd::combine(x, b.phi_s, ns, seed);
  f.grad_a = {Sd::combine(x, b.grad_s.gx.data(), ns, seed), Sd::combine(x, b.grad_s.gy.data(), ns, seed)};
  f.u = {Sd::combine(x + ou, b.phi_v, nv, seed + ou), Sd::combine(x + ov, b.phi_v, nv, seed + ov)};
  f.grad_u(0, 0) = Sd::combine(x + ou, b.grad_v.gx.data(), nv, seed + ou);
  f.grad_u(0, 1) = Sd::combine(x + ou, b.grad_v.gy.data(), nv, seed + ou);
  f.grad_u(1, 0) = Sd::combine(x + ov, b.grad_v.gx.data(), nv, seed + ov);
  f.grad_u(1, 1) = Sd::combine(x + ov, b.grad_v.gy.data(), nv, seed + ov);
  f.T = Sd::combine(x + oT, b.phi_s, ns, seed + oT);
  f.grad_T = {Sd::combine(x + oT, b.grad_s.gx.data(), ns, seed + oT),
              Sd::combine(x + oT, b.grad_s.gy.data(), ns, seed + oT)};
  return f;
}

/// Values only (history levels).
struct PointValues {
  double a = 0.0, ux = 0.0, uy = 0.0, T = 0.0;
};

inline PointValues eval_values(const double* x, const PointBasis& b) {
  const int ns = b.ns, nv = b.nv;
  PointValues v;
  for (int i = 0; i < ns; ++i) {
    v.a += x[i] * b.phi_s[i];
    v.T += x[ns + 2 * nv + i] * b.phi_s[i];
  }
  for (int i = 0; i < nv; ++i) {
    v.ux += x[ns + i] * b.phi_v[i];
    v.uy += x[ns + nv + i] * b.phi_v[i];
  }
  return v;
}

/// r_i += w (phi_i c + dphi_i/dx g.x + dphi_i/dy g.y) for i < n.
template <class S>
void scatter(S* r, int n, double w, const double* phi, const PhysGrad& grad, const S& c, const Vec2<S>& g) {
  using Sd = Seeder<S>;
  for (int i = 0; i < n; ++i) {
    Sd::accumulate(r[i], w * phi[i], c);
    Sd::accumulate(r[i], w * grad.gx[i], g.x);
    Sd::accumulate(r[i], w * grad.gy[i], g.y);
  }
}

template <class S>
void scatter_value(S* r, int n, double w, const double* phi, const S& c) {
  for (int i = 0; i < n; ++i) Seeder<S>::accumulate(r[i], w * phi[i], c);
}

/// Momentum: component c gets value coefficient a[c] and gradient
/// coefficient row B(c, :).
template <class S>
void scatter_momentum(S* r, const PointBasis& b, double w, const Vec2<S>& a, const Mat2<S>& B) {
  for (int c = 0; c < 2; ++c)
    scatter(r + b.ns + c * b.nv, b.nv, w, b.phi_v, b.grad_v, a[c], Vec2<S>{B(c, 0), B(c, 1)});
}

/// Coefficient of grad w in <v, (grad w + grad w^T - 2/3 div w I) n>.
template <class S>
Mat2<S> lifting_coefficient(const Vec2<S>& v, const Eigen::Vector2d& n) {
  Mat2<S> e;
  const S vn = dot(v, n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e(i, j) = v[i] * n(j) + n(i) * v[j];
  e(0, 0) = e(0, 0) - (2.0 / 3.0) * vn;
  e(1, 1) = e(1, 1) - (2.0 / 3.0) * vn;
  return e;
}

} // namespace vmfem::detail
