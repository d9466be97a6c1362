#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vmfem/basis.hpp"
#include "vmfem/mesh.hpp"
#include "vmfem/quadrature.hpp"

namespace vmfem {

/// Continuous Lagrange space of degree k with 1 or 2 components.
///
/// Scalar dofs are numbered vertices first, then edge nodes face by face, then
/// element interiors. Vector coefficients are stored component-blocked:
/// dof(c, i) = c * num_scalar_dofs() + i.
class FunctionSpace {
public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, int components = 1);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return basis_.degree(); }
  int components() const { return components_; }
  const LagrangeBasis& basis() const { return basis_; }

  int local_size() const { return basis_.size(); }
  int num_scalar_dofs() const { return num_scalar_; }
  int num_dofs() const { return components_ * num_scalar_; }
  int dof(int component, int scalar) const { return component * num_scalar_ + scalar; }

  /// Global scalar dofs of element e in local basis order.
  std::span<const int> element_dofs(int e) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(e) * local_size(),
            static_cast<std::size_t>(local_size())};
  }
  NodeKind dof_kind(int scalar) const { return kinds_[scalar]; }
  const Point& dof_point(int scalar) const { return points_[scalar]; }

  /// Scalar dofs lying on boundary faces with the given tag (all boundary
  /// faces for an empty tag), sorted and unique.
  std::vector<int> boundary_dofs(std::string_view tag = {}) const;
  /// Dirichlet mask over scalar dofs for a set of tags (empty set = all).
  std::vector<bool> dirichlet_mask(const std::vector<std::string>& tags) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  LagrangeBasis basis_;
  int components_;
  int num_scalar_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<NodeKind> kinds_;
  std::vector<Point> points_;
};

/// Density, temperature (degree k) and velocity (degree k + 1, two
/// components) spaces.
struct TaylorHoodSpaces {
  FunctionSpace density;
  FunctionSpace temperature;
  FunctionSpace velocity;

  int degree() const { return density.degree(); }
  const Mesh& mesh() const { return density.mesh(); }
  int total_dofs() const {
    return density.num_dofs() + temperature.num_dofs() + velocity.num_dofs();
  }
};

TaylorHoodSpaces build_taylor_hood(std::shared_ptr<const Mesh> mesh, int k);

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Point&)>;

/// Nodal interpolation.
Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarFunction& f);
Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorFunction& f);

/// Point evaluation inside element e at reference coordinates.
double evaluate(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int e, const Point& ref);
Eigen::Vector2d evaluate_vector(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int e,
                                const Point& ref);

/// L2 norm of (discrete - exact). The rule should be exact to at least
/// 2 * degree + 2.
double l2_error(const FunctionSpace& space, const Eigen::VectorXd& coeffs, const ScalarFunction& exact,
                const QuadratureRule& rule);
double l2_error(const FunctionSpace& space, const Eigen::VectorXd& coeffs, const VectorFunction& exact,
                const QuadratureRule& rule);
/// Default rule for l2_error on this space.
QuadratureRule error_rule(const FunctionSpace& space);

/// Integral of a scalar field.
double integrate(const FunctionSpace& space, const Eigen::VectorXd& coeffs, const QuadratureRule& rule);

/// Observed orders log(e[i-1]/e[i]) / log(h[i-1]/h[i]).
std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> hs);

} // namespace vmfem
