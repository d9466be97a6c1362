#pragma once

#include <utility>

#include <Eigen/Dense>

#include "vmfem/dual.hpp"
#include "vmfem/errors.hpp"
#include "vmfem/tensor.hpp"

namespace vmfem {

/// Stabilization constants of the numerical fluxes.
struct FluxParams {
  double zeta = 0.5;    ///< momentum convective dissipation
  double delta = 0.5;   ///< temperature convective dissipation
  double eta = 18.0;    ///< momentum viscous penalty
  double epsilon = 18.0; ///< temperature viscous penalty
  double c_mod = 0.0;   ///< temperature stabilizer scaled by |rho div u|

  /// zeta = delta = 0.5, eta = epsilon = 3 (k + 1)(k + 2), C_mod = 0.
  static FluxParams defaults(int k) {
    const double pen = 3.0 * (k + 1) * (k + 2);
    return FluxParams{0.5, 0.5, pen, pen, 0.0};
  }
  void validate() const {
    if (zeta < 0.0 || delta < 0.0 || eta < 0.0 || epsilon < 0.0 || c_mod < 0.0)
      throw InvalidArgument("flux parameters must be non-negative");
  }
  bool operator==(const FluxParams&) const = default;
};

// Jump and average operators. Interior faces: [[p]] = p+ - p-,
// [[p n]] = p+ n+ + p- n- = (p- - p+) n_F, {{p}} = (p+ + p-)/2. Boundary faces
// (plus == nullptr): [[p]] = p, [[p n]] = p n_F, {{p}} = p.

template <class S>
struct ScalarJumpAvg {
  S jump;
  Vec2<S> jump_n;
  S avg;
};

template <class S>
struct VectorJumpAvg {
  Vec2<S> jump;
  Mat2<S> jump_n; ///< [[v (x) n]]
  Vec2<S> avg;
};

template <class S>
ScalarJumpAvg<S> jump_avg(const S& minus, const S* plus, const Eigen::Vector2d& n_f) {
  if (!plus) return {minus, {minus * n_f.x(), minus * n_f.y()}, minus};
  const S diff = minus - *plus;
  return {*plus - minus, {diff * n_f.x(), diff * n_f.y()}, 0.5 * (minus + *plus)};
}

template <class S>
VectorJumpAvg<S> jump_avg(const Vec2<S>& minus, const Vec2<S>* plus, const Eigen::Vector2d& n_f) {
  if (!plus) return {minus, outer(minus, n_f), minus};
  return {*plus - minus, outer(minus - *plus, n_f), 0.5 * (minus + *plus)};
}

/// One-sided trace of the compressible fields and derived quantities.
template <class S>
struct Trace {
  S rho{}, T{};
  Vec2<S> u{};
  Mat2<S> grad_u{};
  Vec2<S> grad_T{};
  S mu{}, kappa{};
  Mat2<S> rho_tau{}; ///< mu (grad u + grad u^T - 2/3 div u I)
};

namespace detail {

template <class S, class F>
auto average(const Trace<S>& m, const Trace<S>* p, F&& get) {
  if (!p) return get(m);
  return 0.5 * (get(m) + get(*p));
}

template <class S>
Vec2<S> avg_u(const Trace<S>& m, const Trace<S>* p) {
  return p ? 0.5 * (m.u + p->u) : m.u;
}

} // namespace detail

/// sigma_inv = {{rho u}} (x) {{u}} + R {{rho T}} I + zeta {{rho}} |{{u}}.n_F| [[u (x) n]]
template <class S>
Mat2<S> flux_sigma_inv(const Trace<S>& m, const Trace<S>* p, const Eigen::Vector2d& n_f,
                       const FluxParams& params, double gas_constant) {
  const Vec2<S> u_avg = detail::avg_u(m, p);
  const Vec2<S> rho_u_avg = detail::average(m, p, [](const Trace<S>& t) { return t.rho * t.u; });
  const S rho_t_avg = detail::average(m, p, [](const Trace<S>& t) { return t.rho * t.T; });
  const S rho_avg = detail::average(m, p, [](const Trace<S>& t) { return t.rho; });
  const auto ju = jump_avg(m.u, p ? &p->u : nullptr, n_f);
  Mat2<S> f = outer(rho_u_avg, u_avg) + Mat2<S>::identity(gas_constant * rho_t_avg);
  if (params.zeta != 0.0) f = f + (params.zeta * rho_avg * abs(dot(u_avg, n_f))) * ju.jump_n;
  return f;
}

/// sigma_vis = {{rho tau}} - (eta / h_F) {{mu}} [[u (x) n]]
template <class S>
Mat2<S> flux_sigma_vis(const Trace<S>& m, const Trace<S>* p, const Eigen::Vector2d& n_f, double h_f,
                       const FluxParams& params) {
  const Mat2<S> rt_avg = p ? 0.5 * (m.rho_tau + p->rho_tau) : m.rho_tau;
  const S mu_avg = detail::average(m, p, [](const Trace<S>& t) { return t.mu; });
  const auto ju = jump_avg(m.u, p ? &p->u : nullptr, n_f);
  return rt_avg - ((params.eta / h_f) * mu_avg) * ju.jump_n;
}

/// phi_inv = {{rho T}} {{u}} + delta {{rho}} |{{u}}.n_F| [[T n]]
template <class S>
Vec2<S> flux_phi_inv(const Trace<S>& m, const Trace<S>* p, const Eigen::Vector2d& n_f,
                     const FluxParams& params) {
  const Vec2<S> u_avg = detail::avg_u(m, p);
  const S rho_t_avg = detail::average(m, p, [](const Trace<S>& t) { return t.rho * t.T; });
  const S rho_avg = detail::average(m, p, [](const Trace<S>& t) { return t.rho; });
  const auto jt = jump_avg(m.T, p ? &p->T : nullptr, n_f);
  Vec2<S> f = rho_t_avg * u_avg;
  if (params.delta != 0.0) f = f + (params.delta * rho_avg * abs(dot(u_avg, n_f))) * jt.jump_n;
  return f;
}

/// phi_vis = ({{kappa grad T}} - (epsilon / h_F) {{kappa}} [[T n]]) / C_v
template <class S>
Vec2<S> flux_phi_vis(const Trace<S>& m, const Trace<S>* p, const Eigen::Vector2d& n_f, double h_f,
                     const FluxParams& params, double cv) {
  const Vec2<S> kgt = detail::average(m, p, [](const Trace<S>& t) { return t.kappa * t.grad_T; });
  const S kappa_avg = detail::average(m, p, [](const Trace<S>& t) { return t.kappa; });
  const auto jt = jump_avg(m.T, p ? &p->T : nullptr, n_f);
  return (1.0 / cv) * (kgt - ((params.epsilon / h_f) * kappa_avg) * jt.jump_n);
}

/// Auxiliary viscous fluxes ({{mu u}}, {{kappa T}} / C_v).
template <class S>
std::pair<Vec2<S>, S> flux_varphi_lambda(const Trace<S>& m, const Trace<S>* p, double cv) {
  const Vec2<S> mu_u = detail::average(m, p, [](const Trace<S>& t) { return t.mu * t.u; });
  const S kt = detail::average(m, p, [](const Trace<S>& t) { return t.kappa * t.T; });
  return {mu_u, (1.0 / cv) * kt};
}

// Incompressible-mode fluxes, already divided by the constant density.

template <class S>
struct IncompressibleTrace {
  S p{}, T{};
  Vec2<S> u{};
  Mat2<S> grad_u{};
  Vec2<S> grad_T{};
  Mat2<S> tau{}; ///< nu (grad u + grad u^T - 2/3 div u I)
};

/// {{u}} (x) {{u}} + {{p}} I + zeta |{{u}}.n_F| [[u (x) n]]
template <class S>
Mat2<S> flux_sigma_inv_incompressible(const IncompressibleTrace<S>& m, const IncompressibleTrace<S>* p,
                                      const Eigen::Vector2d& n_f, const FluxParams& params) {
  const auto ju = jump_avg(m.u, p ? &p->u : nullptr, n_f);
  const auto jp = jump_avg(m.p, p ? &p->p : nullptr, n_f);
  Mat2<S> f = outer(ju.avg, ju.avg) + Mat2<S>::identity(jp.avg);
  if (params.zeta != 0.0) f = f + (params.zeta * abs(dot(ju.avg, n_f))) * ju.jump_n;
  return f;
}

/// nu * check-sigma_vis = {{tau}} - (eta nu / h_F) [[u (x) n]]
template <class S>
Mat2<S> flux_sigma_vis_incompressible(const IncompressibleTrace<S>& m, const IncompressibleTrace<S>* p,
                                      const Eigen::Vector2d& n_f, double h_f, const FluxParams& params,
                                      double nu) {
  const Mat2<S> tau_avg = p ? 0.5 * (m.tau + p->tau) : m.tau;
  const auto ju = jump_avg(m.u, p ? &p->u : nullptr, n_f);
  return tau_avg - (params.eta * nu / h_f) * ju.jump_n;
}

/// {{T}} {{u}} + delta |{{u}}.n_F| [[T n]]
template <class S>
Vec2<S> flux_phi_inv_incompressible(const IncompressibleTrace<S>& m, const IncompressibleTrace<S>* p,
                                    const Eigen::Vector2d& n_f, const FluxParams& params) {
  const auto ju = jump_avg(m.u, p ? &p->u : nullptr, n_f);
  const auto jt = jump_avg(m.T, p ? &p->T : nullptr, n_f);
  Vec2<S> f = jt.avg * ju.avg;
  if (params.delta != 0.0) f = f + (params.delta * abs(dot(ju.avg, n_f))) * jt.jump_n;
  return f;
}

/// gamma alpha ({{grad T}} - (epsilon / h_F) [[T n]])
template <class S>
Vec2<S> flux_phi_vis_incompressible(const IncompressibleTrace<S>& m, const IncompressibleTrace<S>* p,
                                    const Eigen::Vector2d& n_f, double h_f, const FluxParams& params,
                                    double gamma_alpha) {
  const Vec2<S> gt_avg = p ? 0.5 * (m.grad_T + p->grad_T) : m.grad_T;
  const auto jt = jump_avg(m.T, p ? &p->T : nullptr, n_f);
  return gamma_alpha * (gt_avg - (params.epsilon / h_f) * jt.jump_n);
}

} // namespace vmfem
