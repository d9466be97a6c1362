#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vmfem/fluxes.hpp"
#include "vmfem/mesh.hpp"
#include "vmfem/physics.hpp"
#include "vmfem/solver.hpp"
#include "vmfem/verification.hpp"

namespace vmfem {

enum class CaseKind { Mms, Ap, Custom };

std::string to_string(CaseKind c);

/// Effective run configuration. Defaults depend on the case; see
/// default_config().
struct RunConfig {
  CaseKind kind = CaseKind::Mms;

  // [mesh]
  int nx = 4, ny = 4;
  Rectangle domain{0.0, 1.25, 0.0, 1.25};
  std::string mesh_file; ///< overrides nx/ny/domain when set (solve only)

  // [run]
  int k = 1;
  double dt = 5e-4;
  double t_final = 0.25;
  int bdf_order = 5;
  std::string output_dir = "out";

  // [flux]; eta and epsilon follow 3 (k + 1)(k + 2) while marked auto
  FluxParams flux = FluxParams::defaults(1);
  bool eta_auto = true;
  bool epsilon_auto = true;

  FluidProperties fluid;
  NewtonConfig newton;

  // [mms]
  int levels = 3;
  bool exact_history = false;

  // [ap]
  std::vector<double> mach{0.1, 0.05, 0.025};
  double rho_ref = 1.0;

  // [custom]: uniform initial state, optional no-slip isothermal walls
  double rho0 = 1.0;
  double T0 = 300.0;
  double u0 = 0.0, v0 = 0.0;
  bool walls = true;
  int snapshot_every = 0; ///< 0: final state only

  /// Throws InvalidArgument.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig default_config(CaseKind kind);

/// Parses INI-style text: `[section]` headers, `key = value` lines, `#` or
/// `;` comments. The case comes from `case` in [run] or from a lone [mms],
/// [ap] or [custom] section. Unknown sections or keys, malformed values and a
/// missing case raise ParseError with the line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Writes every setting; parse_config of the output gives back an equal config.
void write_config(std::ostream& out, const RunConfig& cfg);
std::string config_to_string(const RunConfig& cfg);

MmsRunOptions mms_options(const RunConfig& cfg);
ApParameters ap_parameters(const RunConfig& cfg);

} // namespace vmfem
