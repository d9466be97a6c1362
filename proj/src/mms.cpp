#include "vmfem/verification.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>
#include <random>

namespace vmfem {

void MmsParameters::validate() const {
  if (!(cv > 0.0) || !(gas_constant > 0.0) || !(gamma > 1.0)) throw InvalidArgument("invalid gas constants");
  if (nu < 0.0 || kappa < 0.0) throw InvalidArgument("nu and kappa must be non-negative");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) throw InvalidArgument("empty domain");
  if (!(dt > 0.0) || t_final < dt) throw InvalidArgument("need dt > 0 and t_final >= dt");
}

MmsFields mms_exact(const MmsParameters& p, double t, double x, double y) {
  const double s = std::sin(x) * std::sin(y);
  const double e = std::exp(-2.0 * p.nu * t);
  const double th = std::exp(-2.0 * p.kappa * t / p.cv);
  return {s * e, 0.5 * s * th, std::sin(x) * std::cos(y) * e, -std::cos(x) * std::sin(y) * e};
}

MmsForcing mms_forcing(const MmsParameters& p, double t, double x, double y) {
  const double sx = std::sin(x), cx = std::cos(x), sy = std::sin(y), cy = std::cos(y);
  const double s = sx * sy, c = cx * cy;
  const double e = std::exp(-2.0 * p.nu * t);
  const double th = std::exp(-2.0 * p.kappa * t / p.cv);
  const double nu = p.nu, R = p.gas_constant, kc = p.kappa / p.cv;
  MmsForcing f;
  f.s_rho = -2.0 * nu * s * e;
  // d(rho u)/dt + u.grad(rho u) + grad P - div(rho tau); u is solenoidal and
  // tangent to the level sets of rho.
  f.s_u = -4.0 * nu * s * e * e * sx * cy + s * sx * cx * e * e * e + R * s * e * th * cx * sy -
          nu * e * e * std::cos(2.0 * x) * std::sin(2.0 * y);
  f.s_v = 4.0 * nu * s * e * e * cx * sy + s * sy * cy * e * e * e + R * s * e * th * sx * cy +
          nu * e * e * std::sin(2.0 * x) * std::cos(2.0 * y);
  f.s_T = -(nu + kc) * s * s * e * th + kc * s * th - 4.0 * nu / p.cv * s * c * c * e * e * e;
  return f;
}

MmsForcing mms_forcing_printed(const MmsParameters& p, double t, double x, double y) {
  const double sx = std::sin(x), cx = std::cos(x), sy = std::sin(y), cy = std::cos(y);
  const double nu = p.nu, mu = p.nu, kappa = p.kappa, cv = p.cv, R = p.gas_constant;
  const double e2 = std::exp(2.0 * nu * t);
  MmsForcing f;
  f.s_rho = -2.0 * nu * sx * sy / e2;
  f.s_T = (-4.0 * nu * cx * cx * cy * cy + kappa * std::exp(2.0 * (nu - kappa / cv) * t) * sx * sy * e2 -
           (kappa + cv * nu) * sx * sy) /
          std::exp(4.0 * nu * t);
  const double g = std::exp(-2.0 * kappa * t / cv + 4.0 * nu * t);
  f.s_u = (sx * (cx * cy * cy * sx * sy + 2.0 * mu * e2 * cy * e2 - 2.0 * sx * sy +
                 cx * sy * sy * (g * R + sx * sy))) /
          std::exp(6.0 * nu * t);
  f.s_v = (sy * (cy * cx * cx * sx * sy - 2.0 * mu * e2 * cx * e2 - 2.0 * sx * sy +
                 cy * sx * sx * (g * R + sx * sy))) /
          std::exp(6.0 * nu * t);
  return f;
}

std::vector<ForcingDiscrepancy> forcing_discrepancy_report(const MmsParameters& p, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(p.domain.x0, p.domain.x1), uy(p.domain.y0, p.domain.y1),
      ut(0.0, p.t_final);
  std::vector<ForcingDiscrepancy> rows{
      {"S_rho", 0.0, 0.0, "agrees"},
      {"S_T", 0.0, 0.0,
       "printed viscous-heating term -4 nu cos^2 x cos^2 y e^{-4 nu t} lacks the density factor "
       "sin x sin y e^{-2 nu t} and 1/C_v; printed time-derivative term -(kappa + C_v nu) sin x sin y "
       "e^{-4 nu t} lacks one factor of sin x sin y and the temperature decay e^{-2 kappa t / C_v}; "
       "the conduction term kappa sin x sin y e^{-2 kappa t / C_v} agrees for C_v = 1"},
      {"S_u", 0.0, 0.0,
       "printed viscous term 2 mu sin x cos y e^{-2 nu t} is the constant-mu Laplacian, while the "
       "solution needs div(rho nu (grad u + grad u^T)) = nu e^{-4 nu t} cos 2x sin 2y; printed "
       "momentum time derivative -2 sin^2 x sin y e^{-6 nu t} should be -4 nu sin^2 x sin y cos y "
       "e^{-4 nu t}; convective and pressure terms agree"},
      {"S_v", 0.0, 0.0,
       "mirror image of S_u: viscous term and time derivative differ, convective and pressure terms "
       "agree"},
  };
  for (int i = 0; i < samples; ++i) {
    const double t = ut(rng), x = ux(rng), y = uy(rng);
    const MmsForcing a = mms_forcing(p, t, x, y), b = mms_forcing_printed(p, t, x, y);
    const double av[4] = {a.s_rho, a.s_T, a.s_u, a.s_v};
    const double bv[4] = {b.s_rho, b.s_T, b.s_u, b.s_v};
    for (int j = 0; j < 4; ++j) {
      const double d = std::abs(av[j] - bv[j]);
      rows[j].max_abs_difference = std::max(rows[j].max_abs_difference, d);
      rows[j].max_relative_difference =
          std::max(rows[j].max_relative_difference, d / std::max(std::abs(av[j]), 1e-12));
    }
  }
  if (rows[0].max_relative_difference > 1e-12) rows[0].explanation = "differs";
  return rows;
}

void write_discrepancy_report(std::ostream& out, const std::vector<ForcingDiscrepancy>& rows) {
  out << "field,max_abs_difference,max_relative_difference,explanation\n";
  out << std::setprecision(6);
  for (const auto& r : rows)
    out << r.field << ',' << r.max_abs_difference << ',' << r.max_relative_difference << ",\"" << r.explanation
        << "\"\n";
}

MmsLevelResult run_mms_level(int n, const MmsRunOptions& o, std::ostream* log) {
  const MmsParameters& p = o.params;
  p.validate();
  if (n < 1) throw InvalidArgument("mesh size must be positive");
  auto mesh = std::make_shared<const Mesh>(generate_structured(n, n, p.domain));
  auto spaces = std::make_shared<const TaylorHoodSpaces>(build_taylor_hood(mesh, o.k));

  CompressibleOptions co;
  co.fluid.cv = p.cv;
  co.fluid.gas_constant = p.gas_constant;
  co.fluid.gamma = p.gamma;
  co.fluid.model = ViscosityModel::ConstantNu;
  co.fluid.nu = p.nu;
  co.fluid.kappa = p.kappa;
  co.flux = o.flux.value_or(FluxParams::defaults(o.k));
  co.viscous_heating = true;

  const auto rho = [p](const Point& x, double t) { return mms_exact(p, t, x.x(), x.y()).rho; };
  const auto temp = [p](const Point& x, double t) { return mms_exact(p, t, x.x(), x.y()).T; };
  const auto vel = [p](const Point& x, double t) {
    const auto f = mms_exact(p, t, x.x(), x.y());
    return Eigen::Vector2d(f.u, f.v);
  };
  SourceTerms src;
  src.mass = [p](const Point& x, double t) { return mms_forcing(p, t, x.x(), x.y()).s_rho; };
  src.temperature = [p](const Point& x, double t) { return mms_forcing(p, t, x.x(), x.y()).s_T; };
  src.momentum = [p](const Point& x, double t) {
    const auto f = mms_forcing(p, t, x.x(), x.y());
    return Eigen::Vector2d(f.s_u, f.s_v);
  };
  std::vector<DirichletCondition> bcs{{Field::Scalar, {}, rho, {}},
                                      {Field::Velocity, {}, {}, vel},
                                      {Field::Temperature, {}, temp, {}}};
  CompressibleForm form(spaces, co, bcs, src);
  const StateLayout l = form.layout();
  auto state_at = [&](double t) {
    return join_state(l, interpolate(spaces->density, ScalarFunction([&](const Point& x) { return rho(x, t); })),
                      interpolate(spaces->velocity, VectorFunction([&](const Point& x) { return vel(x, t); })),
                      interpolate(spaces->temperature, ScalarFunction([&](const Point& x) { return temp(x, t); })));
  };

  BdfIntegrator integ(form, BdfOptions{o.bdf_order, p.dt, o.newton});
  std::vector<Eigen::VectorXd> past;
  if (o.exact_history)
    for (int i = 1; i < o.bdf_order; ++i) past.push_back(state_at(-i * p.dt));
  integ.initialize(state_at(0.0), 0.0, std::move(past));

  const long total = std::lround(p.t_final / p.dt);
  if (std::abs(total * p.dt - p.t_final) > 1e-9 * p.t_final)
    throw InvalidArgument("t_final must be a whole number of time steps");
  const long steps = o.max_steps > 0 ? std::min<long>(total, o.max_steps) : total;

  MmsLevelResult res;
  res.n = n;
  res.h = mesh_h(*mesh);
  res.dofs = spaces->total_dofs();
  for (long s = 0; s < steps; ++s) {
    const NewtonReport rep = integ.advance();
    res.newton_iterations += rep.iterations;
    res.max_newton_iterations = std::max(res.max_newton_iterations, rep.iterations);
    res.jacobian_evaluations += rep.jacobian_evaluations;
  }
  res.steps = static_cast<int>(steps);
  res.time = integ.time();
  const Eigen::VectorXd& x = integ.state();
  const double t = integ.time();
  res.err_rho = l2_error(spaces->density, x.segment(0, l.scalar),
                         ScalarFunction([&](const Point& q) { return rho(q, t); }), error_rule(spaces->density));
  res.err_u = l2_error(spaces->velocity, x.segment(l.offset_u(), l.velocity),
                       VectorFunction([&](const Point& q) { return vel(q, t); }), error_rule(spaces->velocity));
  res.err_T = l2_error(spaces->temperature, x.segment(l.offset_T(), l.scalar),
                       ScalarFunction([&](const Point& q) { return temp(q, t); }),
                       error_rule(spaces->temperature));
  if (log)
    *log << "mms k=" << o.k << " n=" << n << " dofs=" << res.dofs << " steps=" << res.steps
         << " newton=" << res.newton_iterations << " jacobians=" << res.jacobian_evaluations
         << std::scientific << std::setprecision(4) << " err_u=" << res.err_u << " err_rho=" << res.err_rho
         << " err_T=" << res.err_T << std::defaultfloat << '\n';
  return res;
}

ConvergenceReport make_report(int k, const std::vector<MmsLevelResult>& levels) {
  ConvergenceReport rep;
  std::vector<double> hs, eu, er, et;
  for (const auto& l : levels) {
    hs.push_back(l.h);
    eu.push_back(l.err_u);
    er.push_back(l.err_rho);
    et.push_back(l.err_T);
  }
  std::vector<double> ou, orho, ot;
  if (levels.size() >= 2) {
    ou = convergence_order(eu, hs);
    orho = convergence_order(er, hs);
    ot = convergence_order(et, hs);
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ConvergenceRow r;
    r.k = k;
    r.h = levels[i].h;
    r.dofs = levels[i].dofs;
    r.err_u = levels[i].err_u;
    r.err_rho = levels[i].err_rho;
    r.err_T = levels[i].err_T;
    const double nan = std::nan("");
    r.ord_u = i == 0 ? nan : ou[i - 1];
    r.ord_rho = i == 0 ? nan : orho[i - 1];
    r.ord_T = i == 0 ? nan : ot[i - 1];
    rep.rows.push_back(r);
  }
  return rep;
}

ConvergenceReport run_mms(int levels, const MmsRunOptions& options, int threads, std::ostream* log) {
  if (levels < 1) throw InvalidArgument("need at least one level");
  std::vector<int> ns;
  for (int i = 0; i < levels; ++i) ns.push_back(4 << i);
  std::vector<MmsLevelResult> results(levels);
  if (threads <= 1) {
    for (int i = 0; i < levels; ++i) results[i] = run_mms_level(ns[i], options, log);
  } else {
    // Largest levels first so the long runs start early.
    for (int start = levels - 1; start >= 0; start -= threads) {
      std::vector<std::future<MmsLevelResult>> jobs;
      for (int i = start; i > start - threads && i >= 0; --i)
        jobs.push_back(std::async(std::launch::async, [&, i] { return run_mms_level(ns[i], options, nullptr); }));
      int i = start;
      for (auto& j : jobs) results[i--] = j.get();
    }
    if (log)
      for (const auto& r : results)
        *log << "mms k=" << options.k << " n=" << r.n << " err_u=" << r.err_u << '\n';
  }
  return make_report(options.k, results);
}

} // namespace vmfem
