#include "vmfem/verification.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <ostream>

#include "vmfem/quadrature.hpp"

namespace vmfem {

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const TaylorHoodSpaces> ap_spaces(const ApParameters& p) {
  auto mesh = std::make_shared<const Mesh>(generate_structured(p.n, p.n, Rectangle{0.0, 1.0, 0.0, 1.0}));
  return std::make_shared<const TaylorHoodSpaces>(build_taylor_hood(mesh, p.k));
}

long step_count(const ApParameters& p) {
  const long n = std::lround(p.t_final / p.dt);
  if (n < 1 || std::abs(n * p.dt - p.t_final) > 1e-9 * p.t_final)
    throw InvalidArgument("t_final must be a positive whole number of time steps");
  return n;
}

// L2 norms of rho^gamma - (1 + Ma^2 p_inc) and rho - (1 + Ma^2 p_inc)^{1/gamma}.
std::pair<double, double> ap_differences(const FunctionSpace& space, const Eigen::VectorXd& rho,
                                         const Eigen::VectorXd& p_inc, double mach, double gamma) {
  const QuadratureRule rule = error_rule(space);
  const Mesh& mesh = space.mesh();
  double dp = 0.0, dr = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.num_elements()); ++e) {
    const double det = std::abs(mesh.jacobian(e).determinant());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double r = evaluate(space, rho, e, rule.points[q]);
      const double ps = 1.0 + mach * mach * evaluate(space, p_inc, e, rule.points[q]);
      if (!(r > 0.0) || !(ps > 0.0)) throw InvalidState("non-positive density or reference pressure");
      const double a = std::pow(r, gamma) - ps;
      const double b = r - std::pow(ps, 1.0 / gamma);
      dp += rule.weights[q] * det * a * a;
      dr += rule.weights[q] * det * b * b;
    }
  }
  return {std::sqrt(dp), std::sqrt(dr)};
}

} // namespace

void ApParameters::validate() const {
  if (n < 1) throw InvalidArgument("mesh size must be positive");
  if (k < 1 || k > 3) throw InvalidArgument("k must be 1, 2 or 3");
  if (mach.empty()) throw InvalidArgument("empty Mach list");
  for (double m : mach)
    if (!(m > 0.0)) throw InvalidArgument("Mach numbers must be positive");
  if (!(dt > 0.0) || t_final < dt) throw InvalidArgument("need dt > 0 and t_final >= dt");
  if (!(rho_ref > 0.0) || mu < 0.0) throw InvalidArgument("invalid reference density or viscosity");
  if (!(cv > 0.0) || !(gas_constant > 0.0) || !(gamma > 1.0) || !(prandtl > 0.0))
    throw InvalidArgument("invalid gas constants");
  if (bdf_order < 1 || bdf_order > 5) throw InvalidArgument("BDF order must be in 1..5");
  newton.validate();
}

double ap_initial_density(const ApParameters& p, double mach, double y) {
  return p.rho_ref - 0.5 * mach * mach * std::tanh(y - 0.5);
}

Eigen::Vector2d ap_initial_velocity(double x, double y) {
  const double sx = std::sin(pi * x), sy = std::sin(pi * y);
  return {sx * sx * std::sin(2.0 * pi * y), -sy * sy * std::sin(2.0 * pi * x)};
}

double ap_initial_temperature(const ApParameters& p, double mach, double rho) {
  return std::pow(rho, p.gamma - 1.0) / (p.gas_constant * mach * mach);
}

Eigen::VectorXd run_ap_incompressible(const ApParameters& p, std::shared_ptr<const TaylorHoodSpaces> spaces,
                                      std::ostream* log) {
  IncompressibleOptions o;
  o.rho0 = p.rho_ref;
  o.mu0 = p.mu;
  o.cv = p.cv;
  o.gamma = p.gamma;
  o.kappa0 = (p.cv + p.gas_constant) * p.mu / p.prandtl;
  o.flux = p.flux.value_or(FluxParams::defaults(p.k));
  o.mean_zero_pressure = true;

  const SpaceTimeVector wall_u = [](const Point&, double) { return Eigen::Vector2d::Zero().eval(); };
  const SpaceTimeScalar wall_T = [](const Point&, double) { return 1.0; };
  std::vector<DirichletCondition> bcs{{Field::Velocity, {}, {}, wall_u}, {Field::Temperature, {}, wall_T, {}}};
  IncompressibleForm form(spaces, o, bcs, {});

  const StateLayout l = form.layout();
  const double p0 = std::pow(p.rho_ref, p.gamma);
  Eigen::VectorXd x0 = join_state(
      l, Eigen::VectorXd::Constant(l.scalar, p0),
      interpolate(spaces->velocity, VectorFunction([](const Point& q) { return ap_initial_velocity(q.x(), q.y()); })),
      Eigen::VectorXd::Ones(l.scalar));

  BdfIntegrator integ(form, BdfOptions{p.bdf_order, p.dt, p.newton});
  integ.initialize(x0, 0.0);
  const long steps = step_count(p);
  int iters = 0;
  for (long s = 0; s < steps; ++s) iters += integ.advance().iterations;
  if (log) *log << "ap incompressible steps=" << steps << " newton=" << iters << '\n';
  return integ.state().segment(0, l.scalar);
}

Eigen::VectorXd run_ap_compressible(const ApParameters& p, double mach,
                                    std::shared_ptr<const TaylorHoodSpaces> spaces, ApRow& row, std::ostream* log) {
  CompressibleOptions o;
  o.fluid.cv = p.cv;
  o.fluid.gas_constant = p.gas_constant;
  o.fluid.gamma = p.gamma;
  o.fluid.prandtl = p.prandtl;
  o.fluid.model = ViscosityModel::ConstantMu;
  o.fluid.mu = p.mu;
  o.flux = p.flux.value_or(FluxParams::defaults(p.k));

  const auto rho0 = [p, mach](const Point& q) { return ap_initial_density(p, mach, q.y()); };
  const auto T0 = [p, mach, rho0](const Point& q) { return ap_initial_temperature(p, mach, rho0(q)); };
  const SpaceTimeVector wall_u = [](const Point&, double) { return Eigen::Vector2d::Zero().eval(); };
  const SpaceTimeScalar wall_T = [T0](const Point& q, double) { return T0(q); };
  std::vector<DirichletCondition> bcs{{Field::Velocity, {}, {}, wall_u}, {Field::Temperature, {}, wall_T, {}}};
  CompressibleForm form(spaces, o, bcs, {});

  const StateLayout l = form.layout();
  Eigen::VectorXd x0 = join_state(
      l, interpolate(spaces->density, ScalarFunction(rho0)),
      interpolate(spaces->velocity, VectorFunction([](const Point& q) { return ap_initial_velocity(q.x(), q.y()); })),
      interpolate(spaces->temperature, ScalarFunction(T0)));

  const QuadratureRule rule = error_rule(spaces->density);
  auto mass = [&](const Eigen::VectorXd& x) { return integrate(spaces->density, x.segment(0, l.scalar), rule); };

  BdfIntegrator integ(form, BdfOptions{p.bdf_order, p.dt, p.newton});
  integ.initialize(x0, 0.0);
  const double m0 = mass(x0);
  double m_prev = m0;
  const long steps = step_count(p);
  row = ApRow{};
  row.mach = mach;
  for (long s = 0; s < steps; ++s) {
    try {
      row.newton_iterations += integ.advance().iterations;
    } catch (const NonConvergence& e) {
      throw NonConvergence("Ma=" + std::to_string(mach) + ": " + e.what(), e.last_iterate(), e.report());
    }
    const double m = mass(integ.state());
    row.max_mass_change = std::max(row.max_mass_change, std::abs(m - m_prev) / m0);
    m_prev = m;
  }
  row.steps = static_cast<int>(steps);
  if (log)
    *log << "ap Ma=" << mach << " steps=" << steps << " newton=" << row.newton_iterations
         << " max_mass_change=" << row.max_mass_change << '\n';
  return integ.state().segment(0, l.scalar);
}

ApReport run_ap(const ApParameters& p, int threads, std::ostream* log) {
  p.validate();
  const auto spaces = ap_spaces(p);
  ApReport rep;
  rep.rows.resize(p.mach.size());
  std::vector<Eigen::VectorXd> rho(p.mach.size());
  Eigen::VectorXd p_inc;

  if (threads <= 1) {
    p_inc = run_ap_incompressible(p, spaces, log);
    for (std::size_t i = 0; i < p.mach.size(); ++i) rho[i] = run_ap_compressible(p, p.mach[i], spaces, rep.rows[i], log);
  } else {
    auto inc = std::async(std::launch::async, [&] { return run_ap_incompressible(p, spaces, nullptr); });
    for (std::size_t start = 0; start < p.mach.size(); start += threads - 1 > 0 ? threads - 1 : 1) {
      std::vector<std::future<Eigen::VectorXd>> jobs;
      const std::size_t stop = std::min(p.mach.size(), start + std::max(threads - 1, 1));
      for (std::size_t i = start; i < stop; ++i)
        jobs.push_back(std::async(std::launch::async,
                                  [&, i] { return run_ap_compressible(p, p.mach[i], spaces, rep.rows[i], nullptr); }));
      for (std::size_t i = start; i < stop; ++i) rho[i] = jobs[i - start].get();
    }
    p_inc = inc.get();
  }
  rep.incompressible_steps = static_cast<int>(step_count(p));
  for (std::size_t i = 0; i < p.mach.size(); ++i) {
    const auto [dp, dr] = ap_differences(spaces->density, rho[i], p_inc, p.mach[i], p.gamma);
    rep.rows[i].diff_p = dp;
    rep.rows[i].diff_rho = dr;
  }
  return rep;
}

} // namespace vmfem
