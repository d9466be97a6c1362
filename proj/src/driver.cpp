#include "vmfem/driver.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vmfem/output.hpp"

namespace vmfem {

namespace fs = std::filesystem;

namespace {

std::string write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
  return path.string();
}

std::shared_ptr<const Mesh> config_mesh(const RunConfig& cfg) {
  if (!cfg.mesh_file.empty()) return std::make_shared<const Mesh>(read_mesh_file(cfg.mesh_file));
  return std::make_shared<const Mesh>(generate_structured(cfg.nx, cfg.ny, cfg.domain));
}

struct SolveSetup {
  std::vector<DirichletCondition> bcs;
  SourceTerms sources;
  SpaceTimeScalar rho, T;
  SpaceTimeVector u;
};

SolveSetup solve_setup(const RunConfig& cfg) {
  SolveSetup s;
  switch (cfg.kind) {
  case CaseKind::Mms: {
    const MmsParameters p = mms_options(cfg).params;
    s.rho = [p](const Point& x, double t) { return mms_exact(p, t, x.x(), x.y()).rho; };
    s.T = [p](const Point& x, double t) { return mms_exact(p, t, x.x(), x.y()).T; };
    s.u = [p](const Point& x, double t) {
      const auto f = mms_exact(p, t, x.x(), x.y());
      return Eigen::Vector2d(f.u, f.v);
    };
    s.sources.mass = [p](const Point& x, double t) { return mms_forcing(p, t, x.x(), x.y()).s_rho; };
    s.sources.temperature = [p](const Point& x, double t) { return mms_forcing(p, t, x.x(), x.y()).s_T; };
    s.sources.momentum = [p](const Point& x, double t) {
      const auto f = mms_forcing(p, t, x.x(), x.y());
      return Eigen::Vector2d(f.s_u, f.s_v);
    };
    s.bcs = {{Field::Scalar, {}, s.rho, {}}, {Field::Velocity, {}, {}, s.u}, {Field::Temperature, {}, s.T, {}}};
    break;
  }
  case CaseKind::Ap: {
    const ApParameters p = ap_parameters(cfg);
    const double mach = p.mach.front();
    s.rho = [p, mach](const Point& x, double) { return ap_initial_density(p, mach, x.y()); };
    s.T = [p, mach](const Point& x, double) {
      return ap_initial_temperature(p, mach, ap_initial_density(p, mach, x.y()));
    };
    s.u = [](const Point& x, double) { return ap_initial_velocity(x.x(), x.y()); };
    const SpaceTimeVector wall = [](const Point&, double) { return Eigen::Vector2d::Zero().eval(); };
    s.bcs = {{Field::Velocity, {}, {}, wall}, {Field::Temperature, {}, s.T, {}}};
    break;
  }
  case CaseKind::Custom: {
    const double rho0 = cfg.rho0, T0 = cfg.T0;
    const Eigen::Vector2d u0(cfg.u0, cfg.v0);
    s.rho = [rho0](const Point&, double) { return rho0; };
    s.T = [T0](const Point&, double) { return T0; };
    s.u = [u0](const Point&, double) { return u0; };
    if (cfg.walls) {
      const SpaceTimeVector wall = [](const Point&, double) { return Eigen::Vector2d::Zero().eval(); };
      s.bcs = {{Field::Velocity, {}, {}, wall}, {Field::Temperature, {}, s.T, {}}};
    }
    break;
  }
  }
  return s;
}

std::string snapshot_name(long step) {
  std::ostringstream name;
  name << "fields_" << std::setw(6) << std::setfill('0') << step << ".vtk";
  return name.str();
}

} // namespace

int resolve_threads(int cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* env = std::getenv("VMFEM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

RunArtifacts run_command(Command command, const RunConfig& cfg, int threads, std::ostream& log) {
  cfg.validate();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  RunArtifacts art;
  art.files.push_back(write_text(dir / "config.ini", config_to_string(cfg)));

  switch (command) {
  case Command::Mms: {
    if (cfg.kind != CaseKind::Mms) throw InvalidArgument("the mms command needs case = mms");
    const MmsRunOptions o = mms_options(cfg);
    std::ostringstream disc;
    write_discrepancy_report(disc, forcing_discrepancy_report(o.params, 100, 12345u));
    art.files.push_back(write_text(dir / "forcing_discrepancy.csv", disc.str()));
    const ConvergenceReport rep = run_mms(cfg.levels, o, threads, &log);
    std::ostringstream csv;
    write_convergence_csv(csv, rep);
    art.files.push_back(write_text(dir / ("convergence_k" + std::to_string(cfg.k) + ".csv"), csv.str()));
    break;
  }
  case Command::Ap: {
    if (cfg.kind != CaseKind::Ap) throw InvalidArgument("the ap command needs case = ap");
    const ApReport rep = run_ap(ap_parameters(cfg), threads, &log);
    std::ostringstream csv;
    write_ap_csv(csv, rep);
    art.files.push_back(write_text(dir / "ap.csv", csv.str()));
    break;
  }
  case Command::Solve: {
    auto mesh = config_mesh(cfg);
    auto spaces = std::make_shared<const TaylorHoodSpaces>(build_taylor_hood(mesh, cfg.k));
    const SolveSetup s = solve_setup(cfg);
    CompressibleOptions co;
    co.fluid = cfg.fluid;
    co.flux = cfg.flux;
    CompressibleForm form(spaces, co, s.bcs, s.sources);
    const StateLayout l = form.layout();
    auto state_at = [&](double t) {
      return join_state(
          l, interpolate(spaces->density, ScalarFunction([&](const Point& x) { return s.rho(x, t); })),
          interpolate(spaces->velocity, VectorFunction([&](const Point& x) { return s.u(x, t); })),
          interpolate(spaces->temperature, ScalarFunction([&](const Point& x) { return s.T(x, t); })));
    };
    BdfIntegrator integ(form, BdfOptions{cfg.bdf_order, cfg.dt, cfg.newton});
    integ.initialize(state_at(0.0), 0.0);
    const int sub = spaces->velocity.degree();
    auto snapshot = [&](long step) {
      const fs::path path = dir / snapshot_name(step);
      write_vtk_file(path.string(), *spaces, l, integ.state(), sub);
      art.files.push_back(path.string());
    };
    if (cfg.snapshot_every > 0) snapshot(0);
    const long steps = std::lround(cfg.t_final / cfg.dt);
    for (long n = 1; n <= steps; ++n) {
      const NewtonReport rep = integ.advance();
      log << "step " << n << " t=" << integ.time() << " newton=" << rep.iterations << '\n';
      if (n == steps || (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0)) snapshot(n);
    }
    break;
  }
  }
  for (const auto& f : art.files) log << "wrote " << f << '\n';
  return art;
}

} // namespace vmfem
