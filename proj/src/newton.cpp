#include "vmfem/solver.hpp"

#include <cmath>

namespace vmfem {

void NewtonConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidArgument("Newton tolerances must be positive");
  if (max_iter < 1) throw InvalidArgument("Newton needs at least one iteration");
  if (!(divergence_factor > 1.0)) throw InvalidArgument("divergence factor must exceed 1");
  if (stol < 0.0) throw InvalidArgument("step tolerance must be non-negative");
  if (!(reuse_ratio > 0.0 && reuse_ratio < 1.0)) throw InvalidArgument("reuse ratio must lie in (0, 1)");
}

namespace {

void factorize(NewtonWorkspace& ws, const Eigen::VectorXd& x, NewtonReport& report) {
  try {
    ws.lu.factorize(ws.J);
  } catch (const LinearSolverError& e) {
    throw NonConvergence(std::string("singular Jacobian: ") + e.what(), x, report);
  }
  ++report.jacobian_evaluations;
}

} // namespace

NewtonReport newton_solve(NonlinearSystem& system, Eigen::VectorXd& x, const NewtonConfig& config,
                          NewtonWorkspace* workspace) {
  config.validate();
  if (x.size() != system.size()) throw InvalidArgument("initial guess has the wrong size");
  NewtonWorkspace local;
  NewtonWorkspace& ws = workspace ? *workspace : local;

  NewtonReport report;
  Eigen::VectorXd r;
  bool fresh = !config.reuse_jacobian || !ws.lu.factorized();
  if (fresh) {
    system.jacobian(x, r, ws.J);
    factorize(ws, x, report);
  } else {
    system.residual(x, r);
  }
  double norm = r.norm();
  if (!std::isfinite(norm)) throw NonConvergence("non-finite initial residual", x, report);
  const double r0 = norm;
  const double target = std::max(config.rtol * r0, config.atol);
  report.residual_norms.push_back(norm);

  while (true) {
    if (norm <= target) {
      report.converged = true;
      return report;
    }
    if (report.iterations >= config.max_iter)
      throw NonConvergence("Newton did not converge in " + std::to_string(config.max_iter) +
                               " iterations (residual " + std::to_string(norm) + ")",
                           x, report);
    const Eigen::VectorXd dx = ws.lu.solve(-r);
    Eigen::VectorXd trial = x + dx;
    Eigen::VectorXd r_trial;
    bool bad = false;
    try {
      system.residual(trial, r_trial);
    } catch (const InvalidState&) {
      bad = true;
    }
    const double trial_norm = bad ? INFINITY : r_trial.norm();
    bad = bad || !std::isfinite(trial_norm) || trial_norm > config.divergence_factor * r0;
    if (bad || (!fresh && trial_norm > norm)) {
      if (fresh) throw NonConvergence("Newton diverged (residual " + std::to_string(trial_norm) + ")", x, report);
      // Stale factorization: retry from x with an exact Jacobian.
      system.jacobian(x, r, ws.J);
      factorize(ws, x, report);
      fresh = true;
      continue;
    }
    ++report.iterations;
    const double dx_norm = dx.stableNorm();
    report.update_norms.push_back(dx_norm);
    const double contraction = trial_norm / norm;
    x = std::move(trial);
    r = std::move(r_trial);
    norm = trial_norm;
    report.residual_norms.push_back(norm);
    if (norm <= target) continue;
    if (dx_norm <= config.stol * x.stableNorm()) {
      report.converged = true;
      return report;
    }
    if (!config.reuse_jacobian || contraction > config.reuse_ratio) {
      system.jacobian(x, r, ws.J);
      factorize(ws, x, report);
      fresh = true;
    } else {
      fresh = false;
    }
  }
}

} // namespace vmfem
