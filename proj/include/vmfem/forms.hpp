#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vmfem/fluxes.hpp"
#include "vmfem/physics.hpp"
#include "vmfem/space.hpp"
#include "vmfem/system.hpp"

namespace vmfem {

namespace detail {
class MixedAssembler;
}

/// Unknown ordering shared by both forms:
///   [A | u_x | u_y | T | extras]
/// A is the density (compressible) or the kinematic pressure (incompressible).
struct StateLayout {
  int scalar = 0;   ///< dofs of A (and of T)
  int velocity = 0; ///< dofs of u, both components
  int extras = 0;

  int offset_u() const { return scalar; }
  int offset_T() const { return scalar + velocity; }
  int offset_extra() const { return 2 * scalar + velocity; }
  int size() const { return offset_extra() + extras; }

  static StateLayout of(const TaylorHoodSpaces& spaces, int extras = 0) {
    return {spaces.density.num_dofs(), spaces.velocity.num_dofs(), extras};
  }
};

/// Packs block vectors into a global state (extras zero).
Eigen::VectorXd join_state(const StateLayout& layout, const Eigen::VectorXd& a, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& T);

using SpaceTimeScalar = std::function<double(const Point&, double)>;
using SpaceTimeVector = std::function<Eigen::Vector2d(const Point&, double)>;

enum class Field { Scalar, Velocity, Temperature };

/// Strong boundary data for one field on a set of boundary tags (all boundary
/// faces when `tags` is empty). Scalar data uses `scalar`, velocity `vector`.
struct DirichletCondition {
  Field field = Field::Velocity;
  std::vector<std::string> tags;
  SpaceTimeScalar scalar;
  SpaceTimeVector vector;
};

/// Volume sources; empty functions mean zero.
struct SourceTerms {
  SpaceTimeScalar mass;
  SpaceTimeVector momentum;
  SpaceTimeScalar temperature;
};

struct CompressibleOptions {
  FluidProperties fluid;
  FluxParams flux;
  bool viscous_heating = true;
  /// -1/2 (mass residual) u and -1/2 (mass residual) T terms.
  bool skew_terms = true;
  int quad_degree = 0; ///< 0 selects 3 (k + 1)
};

struct IncompressibleOptions {
  double rho0 = 1.0;
  double mu0 = 0.0;
  double kappa0 = 0.0;
  double cv = 1.0;
  double gamma = 1.4;
  FluxParams flux;
  /// Mean-zero pressure through one Lagrange multiplier (enclosed flows).
  bool mean_zero_pressure = true;
  int quad_degree = 0;

  double nu() const { return mu0 / rho0; }
  double gamma_alpha() const { return kappa0 / (cv * rho0); }
};

/// Shared plumbing of the two forms: spaces, engine, Dirichlet data, sources
/// cached at quadrature points, and the BDF step context.
class MixedForm : public TransientSystem {
public:
  MixedForm(std::shared_ptr<const TaylorHoodSpaces> spaces, int quad_degree, int extras,
            std::vector<DirichletCondition> bcs, SourceTerms sources);
  ~MixedForm() override;

  int size() const override;
  const TaylorHoodSpaces& spaces() const { return *spaces_; }
  StateLayout layout() const;
  const detail::MixedAssembler& assembler() const { return *engine_; }

  void set_step(const StepContext& ctx) override;
  /// Steady evaluation at time t: no time derivative terms.
  void set_steady(double t);
  const StepContext& step() const { return step_; }

  /// Strong Dirichlet rows on or off (off gives the raw discrete residual).
  void set_apply_dirichlet(bool on) { apply_dirichlet_ = on; }
  bool apply_dirichlet() const { return apply_dirichlet_; }
  const std::vector<int>& dirichlet_dofs() const;
  /// Global vector holding boundary data at time t on constrained dofs.
  Eigen::VectorXd dirichlet_values(double t) const;
  /// Overwrites the constrained entries of x with the data at time t.
  void impose_dirichlet(Eigen::VectorXd& x, double t) const;

protected:
  /// Builds the sparsity pattern and Dirichlet rows; derived constructors call
  /// this after adding their extra couplings.
  void finalize();
  void refresh_sources(double t);
  void finish(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix* J) const;

  std::shared_ptr<const TaylorHoodSpaces> spaces_;
  std::unique_ptr<detail::MixedAssembler> engine_;
  std::vector<DirichletCondition> bcs_;
  SourceTerms sources_;
  StepContext step_;
  bool apply_dirichlet_ = true;
  Eigen::VectorXd bc_values_;
  std::vector<int> constrained_;
  // Sources per element and volume quadrature point.
  std::vector<double> src_mass_, src_ux_, src_uy_, src_T_;
};

/// Compressible discrete mass, momentum and temperature equations in
/// (rho, u, T).
class CompressibleForm : public MixedForm {
public:
  CompressibleForm(std::shared_ptr<const TaylorHoodSpaces> spaces, CompressibleOptions options,
                   std::vector<DirichletCondition> bcs = {}, SourceTerms sources = {});

  const CompressibleOptions& options() const { return options_; }
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) override;
  void jacobian(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix& J) override;

private:
  CompressibleOptions options_;
};

/// Incompressible-mode system in (p, u, T) with constant rho0, mu0, kappa0,
/// written per unit density. With mean_zero_pressure one multiplier is
/// appended after T.
class IncompressibleForm : public MixedForm {
public:
  IncompressibleForm(std::shared_ptr<const TaylorHoodSpaces> spaces, IncompressibleOptions options,
                     std::vector<DirichletCondition> bcs = {}, SourceTerms sources = {});

  const IncompressibleOptions& options() const { return options_; }
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) override;
  void jacobian(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix& J) override;

private:
  void add_multiplier(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix* J) const;

  IncompressibleOptions options_;
  Eigen::VectorXd pressure_mass_; ///< integrals of the pressure basis functions
};

} // namespace vmfem
