#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vmfem/config.hpp"

namespace vmfem {

enum class Command { Mms, Ap, Solve };

struct RunArtifacts {
  std::vector<std::string> files; ///< written paths, in order
};

/// Runs one subcommand with an effective configuration and writes its outputs
/// (CSV tables or VTK snapshots, plus `config.ini` with the effective
/// settings) under cfg.output_dir. Progress goes to `log`.
///   mms:   convergence_k<k>.csv and forcing_discrepancy.csv
///   ap:    ap.csv
///   solve: fields_<step>.vtk snapshots of one run of the configured case
///          (the AP case runs its first Mach number, the MMS case one level
///          with nx elements per side)
RunArtifacts run_command(Command command, const RunConfig& cfg, int threads, std::ostream& log);

/// --threads when given, else VMFEM_THREADS, else 1.
int resolve_threads(int cli_value);

} // namespace vmfem
