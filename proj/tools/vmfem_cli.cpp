// vmfem: batch front end for the manufactured-solution and low-Mach studies.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "vmfem/driver.hpp"

using namespace vmfem;

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element solver for the compressible Navier-Stokes equations"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  app.add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides [run] output)");
  app.add_option("--threads", threads, "worker threads for independent runs (default: $VMFEM_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  std::optional<int> k, levels;
  bool reduced = false;
  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--k", k, "polynomial degree")->check(CLI::Range(1, 3));
  mms->add_option("--levels", levels, "number of mesh levels (4, 8, 16, ... elements per side)")
      ->check(CLI::PositiveNumber);
  auto* ap = app.add_subcommand("ap", "low-Mach asymptotic-preservation study");
  ap->add_flag("--reduced", reduced, "16x16 mesh, Ma = 0.1, 0.05, 0.025, t_final = 0.01, dt = 1e-5");
  auto* solve = app.add_subcommand("solve", "single run of the configured case, writing VTK snapshots");
  solve->add_option("--k", k, "polynomial degree")->check(CLI::Range(1, 3));

  CLI11_PARSE(app, argc, argv);

  try {
    Command cmd = Command::Solve;
    CaseKind fallback = CaseKind::Custom;
    if (app.got_subcommand(mms)) {
      cmd = Command::Mms;
      fallback = CaseKind::Mms;
    } else if (app.got_subcommand(ap)) {
      cmd = Command::Ap;
      fallback = CaseKind::Ap;
    }
    RunConfig cfg = config_path.empty() ? default_config(fallback) : parse_config_file(config_path);
    if (reduced) {
      const RunConfig r = default_config(CaseKind::Ap);
      cfg.nx = r.nx;
      cfg.ny = r.ny;
      cfg.domain = r.domain;
      cfg.mach = r.mach;
      cfg.t_final = r.t_final;
      cfg.dt = r.dt;
    }
    if (k) {
      cfg.k = *k;
      const FluxParams d = FluxParams::defaults(cfg.k);
      if (cfg.eta_auto) cfg.flux.eta = d.eta;
      if (cfg.epsilon_auto) cfg.flux.epsilon = d.epsilon;
    }
    if (levels) cfg.levels = *levels;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    run_command(cmd, cfg, resolve_threads(threads), std::cout);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
