#pragma once

#include <deque>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vmfem/errors.hpp"
#include "vmfem/system.hpp"

namespace vmfem {

/// BDF coefficients alpha_0..alpha_p for d/dt y^{n+1} ~ sum_i alpha_i y^{n+1-i} / dt.
std::vector<double> bdf_coefficients(int order);

/// Sparse direct LU with a reusable symbolic analysis.
class SparseLU {
public:
  SparseLU();
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;

  /// Factorizes A; the symbolic analysis is redone only when the pattern changes.
  void factorize(const SparseMatrix& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool factorized() const { return factorized_; }
  /// "umfpack" or "eigen-sparselu".
  static const char* backend();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool factorized_ = false;
};

/// One-shot solve of A x = b. Throws LinearSolverError on a singular matrix or
/// when the relative residual exceeds 1e-10.
Eigen::VectorXd sparse_lu_solve(const SparseMatrix& A, const Eigen::VectorXd& b);

struct NewtonConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  int max_iter = 25;
  /// Failure when the residual grows beyond this factor of the initial norm.
  double divergence_factor = 1e6;
  /// Converged when the update is below stol * ||x|| (roundoff floor).
  double stol = 1e-14;
  /// Keep the last factorization while the residual contracts by reuse_ratio.
  bool reuse_jacobian = false;
  double reuse_ratio = 0.2;

  void validate() const;
  bool operator==(const NewtonConfig&) const = default;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  int jacobian_evaluations = 0;
  std::vector<double> residual_norms; ///< before the first update and after each one
  std::vector<double> update_norms;
};

/// Raised when Newton fails; carries the last iterate and the report.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, Eigen::VectorXd last, NewtonReport report)
      : std::runtime_error(what), last_(std::move(last)), report_(std::move(report)) {}
  const Eigen::VectorXd& last_iterate() const { return last_; }
  const NewtonReport& report() const { return report_; }

private:
  Eigen::VectorXd last_;
  NewtonReport report_;
};

/// Jacobian and factorization kept between Newton solves.
struct NewtonWorkspace {
  SparseMatrix J;
  SparseLU lu;
};

/// Solves F(x) = 0 in place. Converged when ||F|| <= max(rtol ||F(x0)||, atol)
/// or the update stagnates below stol.
NewtonReport newton_solve(NonlinearSystem& system, Eigen::VectorXd& x, const NewtonConfig& config,
                          NewtonWorkspace* workspace = nullptr);

struct BdfOptions {
  int max_order = 5;
  double dt = 1e-3;
  NewtonConfig newton;
};

/// Fixed-step BDF time marching with an ascending order ramp 1, 2, ..., max_order.
class BdfIntegrator {
public:
  BdfIntegrator(TransientSystem& system, BdfOptions options);

  /// Sets y(t0) = x0. `past` optionally supplies y(t0 - dt), y(t0 - 2 dt), ...,
  /// which shortens or removes the ramp.
  void initialize(const Eigen::VectorXd& x0, double t0, std::vector<Eigen::VectorXd> past = {});
  /// Takes one step; throws NonConvergence with the step time on failure.
  NewtonReport advance();

  const Eigen::VectorXd& state() const { return history_.front(); }
  double time() const { return time_; }
  int steps() const { return steps_; }
  /// Order the next step will use.
  int next_order() const;
  int last_order() const { return last_order_; }
  const std::deque<Eigen::VectorXd>& history() const { return history_; }
  const BdfOptions& options() const { return options_; }

private:
  TransientSystem& system_;
  BdfOptions options_;
  std::deque<Eigen::VectorXd> history_;
  double time_ = 0.0;
  int steps_ = 0;
  int last_order_ = 0;
  NewtonWorkspace workspace_;
};

} // namespace vmfem
