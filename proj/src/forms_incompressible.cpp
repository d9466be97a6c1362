#include "vmfem/forms.hpp"

#include "vmfem/detail/kernel_util.hpp"

namespace vmfem {

namespace {

using detail::ElementGeometry;
using detail::FaceGeometry;
using detail::MixedAssembler;
using detail::PointBasis;

struct IncompressibleKernel {
  const MixedAssembler& eng;
  const IncompressibleOptions& opt;
  const StepContext& step;
  const std::vector<double>& s_ux;
  const std::vector<double>& s_uy;
  const std::vector<double>& s_T;

  template <class S>
  IncompressibleTrace<S> make_trace(const detail::PointFields<S>& f) const {
    IncompressibleTrace<S> t;
    t.p = f.a;
    t.T = f.T;
    t.u = f.u;
    t.grad_u = f.grad_u;
    t.grad_T = f.grad_T;
    t.tau = stress_tensor(S(opt.nu()), f.grad_u);
    return t;
  }

  template <class S>
  void volume(const ElementGeometry& g, const double* x, const std::vector<const double*>& hist, S* r) const {
    const auto& rule = eng.volume_rule();
    const auto& ts = eng.scalar_volume();
    const auto& tv = eng.vector_volume();
    const int ns = eng.ns(), nv = eng.nv();
    const int nq = static_cast<int>(rule.size());
    const int order = step.order();
    const double inv_dt = order > 0 ? 1.0 / step.dt : 0.0;
    const double inv_rho = 1.0 / opt.rho0;
    const double ga = opt.gamma_alpha();

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

      S d_T{};
      Vec2<S> d_u{};
      if (order > 0) {
        const double a0 = step.alpha[0] * inv_dt;
        d_u = a0 * f.u;
        d_T = a0 * f.T;
        for (int i = 1; i <= order; ++i) {
          const auto h = detail::eval_values(hist[i - 1], b);
          const double ai = step.alpha[i] * inv_dt;
          d_u = d_u + Vec2<S>{S(ai * h.ux), S(ai * h.uy)};
          d_T = d_T + ai * h.T;
        }
      }

      const S div = trace(f.grad_u);
      detail::scatter_value(r, ns, w, b.phi_s, div);

      const Mat2<S> tau = stress_tensor(S(opt.nu()), f.grad_u);
      const Vec2<S> mom_a = d_u - (0.5 * div) * f.u - Vec2<S>{S(inv_rho * s_ux[sq]), S(inv_rho * s_uy[sq])};
      const Mat2<S> mom_b = tau - outer(f.u, f.u) - Mat2<S>::identity(f.a);
      detail::scatter_momentum(r, b, w, mom_a, mom_b);

      const S tem_c = d_T - (0.5 * div) * f.T + (opt.gamma - 1.0) * div * f.T - inv_rho * s_T[sq];
      Vec2<S> tem_d = ga * f.grad_T - f.T * f.u;
      if (opt.flux.c_mod != 0.0) tem_d = tem_d + ((opt.gamma - 1.0) * opt.flux.c_mod * abs(div)) * f.grad_T;
      detail::scatter(r + ns + 2 * nv, ns, w, b.phi_s, b.grad_s, tem_c, tem_d);
    }
  }

  template <class S>
  void face(const FaceGeometry& g, const double* xm, const double* xp, S* r) const {
    const auto& rule = eng.edge_rule();
    const int ns = eng.ns(), nv = eng.nv(), nl = eng.local_size();
    const int nq = static_cast<int>(rule.size());
    const double nu = opt.nu();
    const double ga = opt.gamma_alpha();

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
      const auto tm = make_trace(detail::eval_fields<S>(xm, bm, 0));
      IncompressibleTrace<S> tp;
      if (interior) {
        const auto& tsp = eng.scalar_face(g.plus.table);
        const auto& tvp = eng.vector_face(g.plus.table);
        bp.phi_s = tsp.phi.data() + q * ns;
        bp.phi_v = tvp.phi.data() + q * nv;
        bp.grad_s.compute(tsp, q, g.plus.jinv_t);
        bp.grad_v.compute(tvp, q, g.plus.jinv_t);
        tp = make_trace(detail::eval_fields<S>(xp, bp, nl));
      }
      const IncompressibleTrace<S>* pp = interior ? &tp : nullptr;

      const Mat2<S> sigma = flux_sigma_inv_incompressible(tm, pp, g.normal_f, opt.flux) -
                            flux_sigma_vis_incompressible(tm, pp, g.normal_f, g.length, opt.flux, nu);
      const Vec2<S> phi = flux_phi_inv_incompressible(tm, pp, g.normal_f, opt.flux) -
                          flux_phi_vis_incompressible(tm, pp, g.normal_f, g.length, opt.flux, ga);
      const Vec2<S> u_avg = interior ? 0.5 * (tm.u + tp.u) : tm.u;
      const S T_avg = interior ? 0.5 * (tm.T + tp.T) : tm.T;

      auto side = [&](const IncompressibleTrace<S>& t, const PointBasis& b, const Eigen::Vector2d& n, S* rs) {
        const Vec2<S> a = apply(sigma, n);
        const Mat2<S> e = detail::lifting_coefficient(nu * (u_avg - t.u), n);
        detail::scatter_momentum(rs, b, w, a, e);
        const S c = dot(phi, n);
        const S lam = ga * (T_avg - t.T);
        detail::scatter(rs + ns + 2 * nv, ns, w, b.phi_s, b.grad_s, c, Vec2<S>{lam * n.x(), lam * n.y()});
      };
      side(tm, bm, g.minus.normal, r);
      if (interior) side(tp, bp, g.plus.normal, r + nl);
    }
  }
};

} // namespace

IncompressibleForm::IncompressibleForm(std::shared_ptr<const TaylorHoodSpaces> spaces,
                                       IncompressibleOptions options, std::vector<DirichletCondition> bcs,
                                       SourceTerms sources)
    : MixedForm(std::move(spaces), options.quad_degree, options.mean_zero_pressure ? 1 : 0, std::move(bcs),
                std::move(sources)),
      options_(std::move(options)) {
  if (!(options_.rho0 > 0.0) || !(options_.cv > 0.0)) throw InvalidArgument("rho0 and C_v must be positive");
  if (options_.mu0 < 0.0 || options_.kappa0 < 0.0) throw InvalidArgument("mu0 and kappa0 must be non-negative");
  options_.flux.validate();

  const FunctionSpace& ps = spaces_->density;
  pressure_mass_ = Eigen::VectorXd::Zero(ps.num_dofs());
  const auto& rule = engine_->volume_rule();
  const auto& tab = engine_->scalar_volume();
  const int ns = engine_->ns();
  for (int e = 0; e < static_cast<int>(ps.mesh().num_elements()); ++e) {
    const auto dofs = ps.element_dofs(e);
    const double det = engine_->element_geometry(e).det;
    for (std::size_t q = 0; q < rule.size(); ++q)
      for (int i = 0; i < ns; ++i) pressure_mass_(dofs[i]) += rule.weights[q] * det * tab.phi[q * ns + i];
  }
  if (options_.mean_zero_pressure) {
    std::vector<int> all(ps.num_dofs());
    for (int i = 0; i < ps.num_dofs(); ++i) all[i] = i;
    engine_->couple_extra(0, all);
  }
  finalize();
}

void IncompressibleForm::add_multiplier(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix* J) const {
  if (!options_.mean_zero_pressure) return;
  const int lam = engine_->offset_extra();
  const int np = static_cast<int>(pressure_mass_.size());
  r.head(np) += x(lam) * pressure_mass_;
  r(lam) = pressure_mass_.dot(x.head(np));
  if (J) {
    double* v = J->valuePtr();
    for (int i = 0; i < np; ++i) {
      v[engine_->entry(i, lam)] += pressure_mass_(i);
      v[engine_->entry(lam, i)] += pressure_mass_(i);
    }
  }
}

void IncompressibleForm::residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) {
  if (x.size() != size()) throw InvalidArgument("state has the wrong size");
  const IncompressibleKernel kernel{*engine_, options_, step_, src_ux_, src_uy_, src_T_};
  std::vector<const Eigen::VectorXd*> hist(step_.history.begin(), step_.history.end());
  engine_->assemble_residual(kernel, x, hist, r);
  add_multiplier(x, r, nullptr);
  finish(x, r, nullptr);
}

void IncompressibleForm::jacobian(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix& J) {
  if (x.size() != size()) throw InvalidArgument("state has the wrong size");
  const IncompressibleKernel kernel{*engine_, options_, step_, src_ux_, src_uy_, src_T_};
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
  add_multiplier(x, r, &J);
  finish(x, r, &J);
}

} // namespace vmfem
