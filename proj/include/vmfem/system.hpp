#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vmfem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// F(x) = 0 with an exact Jacobian.
class NonlinearSystem {
public:
  virtual ~NonlinearSystem() = default;

  virtual int size() const = 0;
  virtual void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) = 0;
  /// Fills both the residual and the Jacobian at x.
  virtual void jacobian(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix& J) = 0;
};

/// Time level being solved for by a multistep scheme:
/// d/dt y(t_new) ~ (alpha[0] y_new + sum_i alpha[i] history[i-1]) / dt.
struct StepContext {
  double time = 0.0; ///< t_new
  double dt = 0.0;
  std::vector<double> alpha;
  std::vector<const Eigen::VectorXd*> history; ///< y^n, y^{n-1}, ... (alpha.size() - 1 entries)

  /// 0 for a steady evaluation (no alpha).
  int order() const { return alpha.empty() ? 0 : static_cast<int>(alpha.size()) - 1; }
};

/// Semi-discrete system whose residual depends on the step context.
class TransientSystem : public NonlinearSystem {
public:
  virtual void set_step(const StepContext& ctx) = 0;
};

} // namespace vmfem
