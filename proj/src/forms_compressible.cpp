#include "vmfem/forms.hpp"

#include "vmfem/detail/kernel_util.hpp"

namespace vmfem {

namespace {

using detail::FaceGeometry;
using detail::ElementGeometry;
using detail::MixedAssembler;
using detail::PointBasis;

struct CompressibleKernel {
  const MixedAssembler& eng;
  const CompressibleOptions& opt;
  const StepContext& step;
  const std::vector<double>& s_mass;
  const std::vector<double>& s_ux;
  const std::vector<double>& s_uy;
  const std::vector<double>& s_T;

  template <class S>
  Trace<S> make_trace(const detail::PointFields<S>& f) const {
    Trace<S> t;
    t.rho = f.a;
    t.T = f.T;
    t.u = f.u;
    t.grad_u = f.grad_u;
    t.grad_T = f.grad_T;
    t.mu = dynamic_viscosity(f.a, f.T, opt.fluid);
    t.kappa = heat_conductivity(t.mu, opt.fluid);
    t.rho_tau = stress_tensor(t.mu, f.grad_u);
    return t;
  }

  template <class S>
  void volume(const ElementGeometry& g, const double* x, const std::vector<const double*>& hist, S* r) const {
    const auto& rule = eng.volume_rule();
    const auto& ts = eng.scalar_volume();
    const auto& tv = eng.vector_volume();
    const FluidProperties& fl = opt.fluid;
    const int ns = eng.ns(), nv = eng.nv();
    const int nq = static_cast<int>(rule.size());
    const int order = step.order();
    const double inv_dt = order > 0 ? 1.0 / step.dt : 0.0;

    PointBasis b;
    b.ns = ns;
    b.nv = nv;
    for (int q = 0; q < nq; ++q) {
      const double w = rule.weights[q] * g.det;
      b.phi_s = ts.phi.data() + q * ns;
      b.phi_v = tv.phi.data() + q * nv;
      b.grad_s.compute(ts, q, g.jinv_t);
      b.grad_v.compute(tv, q, g.jinv_t);
      const auto f = detail::eval_fields<S>(x, b, 0);
      const std::size_t sq = static_cast<std::size_t>(g.element) * nq + q;

      // BDF combination of the pointwise products.
      S d_rho{}, d_rho_T{};
      Vec2<S> d_rho_u{};
      if (order > 0) {
        const double a0 = step.alpha[0] * inv_dt;
        d_rho = a0 * f.a;
        d_rho_u = a0 * (f.a * f.u);
        d_rho_T = a0 * (f.a * f.T);
        for (int i = 1; i <= order; ++i) {
          const auto h = detail::eval_values(hist[i - 1], b);
          const double ai = step.alpha[i] * inv_dt;
          d_rho = d_rho + ai * h.a;
          d_rho_u = d_rho_u + Vec2<S>{S(ai * h.a * h.ux), S(ai * h.a * h.uy)};
          d_rho_T = d_rho_T + ai * h.a * h.T;
        }
      }

      const S div = trace(f.grad_u);
      const S mu = dynamic_viscosity(f.a, f.T, fl);
      const S kappa = heat_conductivity(mu, fl);
      const Mat2<S> rho_tau = stress_tensor(mu, f.grad_u);
      const S mass_res = d_rho + dot(f.u, f.grad_a) + f.a * div - s_mass[sq];
      const S half_res = opt.skew_terms ? 0.5 * mass_res : S(0.0);

      detail::scatter_value(r, ns, w, b.phi_s, mass_res);

      const Vec2<S> mom_a = d_rho_u - half_res * f.u - Vec2<S>{S(s_ux[sq]), S(s_uy[sq])};
      const S rho_T = f.a * f.T;
      const Mat2<S> mom_b = rho_tau - outer(f.a * f.u, f.u) - Mat2<S>::identity(fl.gas_constant * rho_T);
      detail::scatter_momentum(r, b, w, mom_a, mom_b);

      S tem_c = d_rho_T - half_res * f.T + (fl.gamma - 1.0) * rho_T * div - s_T[sq];
      if (opt.viscous_heating) tem_c = tem_c - (1.0 / fl.cv) * contract(rho_tau, f.grad_u);
      Vec2<S> tem_d = (kappa / fl.cv) * f.grad_T - rho_T * f.u;
      if (opt.flux.c_mod != 0.0)
        tem_d = tem_d + ((fl.gamma - 1.0) * opt.flux.c_mod * abs(f.a * div)) * f.grad_T;
      detail::scatter(r + ns + 2 * nv, ns, w, b.phi_s, b.grad_s, tem_c, tem_d);
    }
  }

  template <class S>
  void face(const FaceGeometry& g, const double* xm, const double* xp, S* r) const {
    const auto& rule = eng.edge_rule();
    const FluidProperties& fl = opt.fluid;
    const int ns = eng.ns(), nv = eng.nv(), nl = eng.local_size();
    const int nq = static_cast<int>(rule.size());

    PointBasis bm, bp;
    bm.ns = bp.ns = ns;
    bm.nv = bp.nv = nv;
    const auto& tsm = eng.scalar_face(g.minus.table);
    const auto& tvm = eng.vector_face(g.minus.table);
    const bool interior = xp != nullptr;
    for (int q = 0; q < nq; ++q) {
      const double w = rule.weights[q] * g.length;
      bm.phi_s = tsm.phi.data() + q * ns;
      bm.phi_v = tvm.phi.data() + q * nv;
      bm.grad_s.compute(tsm, q, g.minus.jinv_t);
      bm.grad_v.compute(tvm, q, g.minus.jinv_t);
      const Trace<S> tm = make_trace(detail::eval_fields<S>(xm, bm, 0));
      Trace<S> tp;
      if (interior) {
        const auto& tsp = eng.scalar_face(g.plus.table);
        const auto& tvp = eng.vector_face(g.plus.table);
        bp.phi_s = tsp.phi.data() + q * ns;
        bp.phi_v = tvp.phi.data() + q * nv;
        bp.grad_s.compute(tsp, q, g.plus.jinv_t);
        bp.grad_v.compute(tvp, q, g.plus.jinv_t);
        tp = make_trace(detail::eval_fields<S>(xp, bp, nl));
      }
      const Trace<S>* pp = interior ? &tp : nullptr;

      const Mat2<S> sigma = flux_sigma_inv(tm, pp, g.normal_f, opt.flux, fl.gas_constant) -
                            flux_sigma_vis(tm, pp, g.normal_f, g.length, opt.flux);
      const Vec2<S> phi = flux_phi_inv(tm, pp, g.normal_f, opt.flux) -
                          flux_phi_vis(tm, pp, g.normal_f, g.length, opt.flux, fl.cv);
      const auto aux = flux_varphi_lambda(tm, pp, fl.cv);

      auto side = [&](const Trace<S>& t, const PointBasis& b, const Eigen::Vector2d& n, S* rs) {
        const Vec2<S> a = apply(sigma, n);
        const Mat2<S> e = detail::lifting_coefficient(aux.first - t.mu * t.u, n);
        detail::scatter_momentum(rs, b, w, a, e);
        const S c = dot(phi, n);
        const S lam = aux.second - (1.0 / fl.cv) * (t.kappa * t.T);
        detail::scatter(rs + ns + 2 * nv, ns, w, b.phi_s, b.grad_s, c, Vec2<S>{lam * n.x(), lam * n.y()});
      };
      side(tm, bm, g.minus.normal, r);
      if (interior) side(tp, bp, g.plus.normal, r + nl);
    }
  }
};

} // namespace

CompressibleForm::CompressibleForm(std::shared_ptr<const TaylorHoodSpaces> spaces, CompressibleOptions options,
                                   std::vector<DirichletCondition> bcs, SourceTerms sources)
    : MixedForm(std::move(spaces), options.quad_degree, 0, std::move(bcs), std::move(sources)),
      options_(std::move(options)) {
  options_.fluid.validate();
  options_.flux.validate();
  finalize();
}

void CompressibleForm::residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) {
  if (x.size() != size()) throw InvalidArgument("state has the wrong size");
  const CompressibleKernel kernel{*engine_, options_, step_, src_mass_, src_ux_, src_uy_, src_T_};
  std::vector<const Eigen::VectorXd*> hist(step_.history.begin(), step_.history.end());
  engine_->assemble_residual(kernel, x, hist, r);
  finish(x, r, nullptr);
}

void CompressibleForm::jacobian(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix& J) {
  if (x.size() != size()) throw InvalidArgument("state has the wrong size");
  const CompressibleKernel kernel{*engine_, options_, step_, src_mass_, src_ux_, src_uy_, src_T_};
  std::vector<const Eigen::VectorXd*> hist(step_.history.begin(), step_.history.end());
  switch (engine_->local_size()) {
  case 18:
    engine_->assemble_jacobian<18>(kernel, x, hist, r, J);
    break;
  case 32:
    engine_->assemble_jacobian<32>(kernel, x, hist, r, J);
    break;
  case 50:
    engine_->assemble_jacobian<50>(kernel, x, hist, r, J);
    break;
  default:
    throw InvalidArgument("Jacobian assembly supports k = 1, 2, 3");
  }
  finish(x, r, &J);
}

} // namespace vmfem
