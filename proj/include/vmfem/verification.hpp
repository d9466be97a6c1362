#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vmfem/fluxes.hpp"
#include "vmfem/forms.hpp"
#include "vmfem/mesh.hpp"
#include "vmfem/solver.hpp"

namespace vmfem {

// ---- manufactured solution ------------------------------------------------

struct MmsParameters {
  double cv = 1.0;
  double gas_constant = 1.0;
  double gamma = 2.0; ///< 1 + R / C_v
  double nu = 3.0;
  double kappa = 0.47;
  Rectangle domain{0.0, 1.25, 0.0, 1.25};
  double dt = 5e-4;
  double t_final = 0.25;

  void validate() const;
  bool operator==(const MmsParameters&) const = default;
};

struct MmsFields {
  double rho, T, u, v;
};

struct MmsForcing {
  double s_rho, s_T, s_u, s_v;
};

/// rho = s e^{-2 nu t}, T = s e^{-2 kappa t / C_v} / 2, u = (sin x cos y, -cos x sin y) e^{-2 nu t},
/// with s = sin x sin y.
MmsFields mms_exact(const MmsParameters& p, double t, double x, double y);

/// Sources for which mms_exact solves the compressible equations with mu = nu rho.
MmsForcing mms_forcing(const MmsParameters& p, double t, double x, double y);

/// The source expressions exactly as printed with the original manufactured
/// solution (the printed mu is read as nu). Kept only for the discrepancy report.
MmsForcing mms_forcing_printed(const MmsParameters& p, double t, double x, double y);

struct ForcingDiscrepancy {
  std::string field;
  double max_abs_difference = 0.0;
  double max_relative_difference = 0.0;
  std::string explanation;
};

/// Compares mms_forcing with mms_forcing_printed at random (t, x, y) samples.
std::vector<ForcingDiscrepancy> forcing_discrepancy_report(const MmsParameters& p, int samples, unsigned seed);
void write_discrepancy_report(std::ostream& out, const std::vector<ForcingDiscrepancy>& rows);

/// Newton defaults for the studies: the Jacobian is kept across steps while
/// it still contracts the residual.
inline NewtonConfig reusing_newton() {
  NewtonConfig c;
  c.reuse_jacobian = true;
  return c;
}

struct MmsRunOptions {
  MmsParameters params;
  int k = 1;
  /// Flux constants; defaults for k when absent.
  std::optional<FluxParams> flux;
  int bdf_order = 5;
  NewtonConfig newton = reusing_newton();
  /// Start from exact states at t = -dt, -2 dt, ... instead of the order ramp.
  bool exact_history = false;
  /// Stop after this many steps (0 = run to t_final).
  int max_steps = 0;
};

struct MmsLevelResult {
  int n = 0; ///< elements per side
  double h = 0.0;
  int dofs = 0;
  double err_u = 0.0, err_rho = 0.0, err_T = 0.0;
  double time = 0.0;
  int steps = 0;
  int newton_iterations = 0;
  int max_newton_iterations = 0;
  int jacobian_evaluations = 0;
};

struct ConvergenceRow {
  int k = 0;
  double h = 0.0;
  int dofs = 0;
  double err_u = 0.0, err_rho = 0.0, err_T = 0.0;
  /// NaN on the first level.
  double ord_u = 0.0, ord_rho = 0.0, ord_T = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows; ///< decreasing h
};

/// Runs the manufactured-solution problem on an n x n structured mesh.
MmsLevelResult run_mms_level(int n, const MmsRunOptions& options, std::ostream* log = nullptr);

/// Levels n = 4, 8, 16, ... (`levels` of them); levels may run on `threads` workers.
ConvergenceReport run_mms(int levels, const MmsRunOptions& options, int threads = 1, std::ostream* log = nullptr);
ConvergenceReport make_report(int k, const std::vector<MmsLevelResult>& levels);

// ---- low-Mach asymptotic preservation -----------------------------------------

struct ApParameters {
  int n = 16;
  int k = 2;
  std::vector<double> mach{0.1, 0.05, 0.025};
  double t_final = 0.01;
  double dt = 1e-5;
  double rho_ref = 1.0;
  double mu = 0.01;
  double cv = 717.8;
  double gas_constant = 287.0;
  double gamma = 1.4;
  double prandtl = 0.72;
  std::optional<FluxParams> flux;
  int bdf_order = 5;
  NewtonConfig newton = reusing_newton();

  void validate() const;
  bool operator==(const ApParameters&) const = default;
};

/// Initial density rho_ref - (Ma^2 / 2) tanh(y - 1/2).
double ap_initial_density(const ApParameters& p, double mach, double y);
/// Initial velocity (sin^2(pi x) sin(2 pi y), -sin^2(pi y) sin(2 pi x)).
Eigen::Vector2d ap_initial_velocity(double x, double y);
/// Temperature with rho R T = rho^gamma / Ma^2.
double ap_initial_temperature(const ApParameters& p, double mach, double rho);

struct ApRow {
  double mach = 0.0;
  double diff_p = 0.0;
  double diff_rho = 0.0;
  /// max over steps of |M^{n+1} - M^n| / M^0
  double max_mass_change = 0.0;
  int steps = 0;
  int newton_iterations = 0;
};

struct ApReport {
  std::vector<ApRow> rows; ///< in the order of ApParameters::mach
  int incompressible_steps = 0;
};

/// Incompressible run: kinematic pressure (mean zero) at t_final.
Eigen::VectorXd run_ap_incompressible(const ApParameters& p, std::shared_ptr<const TaylorHoodSpaces> spaces,
                                      std::ostream* log = nullptr);
/// Compressible run at one Mach number; returns the final state.
Eigen::VectorXd run_ap_compressible(const ApParameters& p, double mach,
                                    std::shared_ptr<const TaylorHoodSpaces> spaces, ApRow& row,
                                    std::ostream* log = nullptr);
ApReport run_ap(const ApParameters& p, int threads = 1, std::ostream* log = nullptr);

} // namespace vmfem
