#include "vmfem/space.hpp"

#include <algorithm>
#include <cmath>

#include "vmfem/errors.hpp"

namespace vmfem {

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, int components)
    : mesh_(std::move(mesh)), basis_(degree), components_(components) {
  if (!mesh_) throw InvalidArgument("function space needs a mesh");
  if (components < 1 || components > 2) throw InvalidArgument("function space supports 1 or 2 components");

  const Mesh& m = *mesh_;
  const int k = degree;
  const int nv = static_cast<int>(m.num_vertices());
  const int nf = static_cast<int>(m.num_faces());
  const int ne = static_cast<int>(m.num_elements());
  const int per_edge = k - 1;
  const int per_cell = (k - 1) * (k - 2) / 2;
  num_scalar_ = nv + nf * per_edge + ne * per_cell;

  kinds_.resize(num_scalar_);
  points_.resize(num_scalar_);
  cell_dofs_.resize(static_cast<std::size_t>(ne) * local_size());

  for (int e = 0; e < ne; ++e) {
    int* dofs = cell_dofs_.data() + static_cast<std::size_t>(e) * local_size();
    for (int i = 0; i < local_size(); ++i) {
      const ReferenceNode& node = basis_.nodes()[i];
      int g = -1;
      switch (node.kind) {
      case NodeKind::Vertex:
        g = m.elements()[e][node.entity];
        break;
      case NodeKind::Edge: {
        const int f = m.element_faces(e)[node.entity];
        const Face& face = m.face(f);
        const int side = face.minus == e ? 0 : 1;
        const int pos = m.face_reversed(f, side) ? per_edge - 1 - node.position : node.position;
        g = nv + f * per_edge + pos;
        break;
      }
      case NodeKind::Interior:
        g = nv + nf * per_edge + e * per_cell + node.position;
        break;
      }
      dofs[i] = g;
      kinds_[g] = node.kind;
      points_[g] = m.to_physical(e, node.point);
    }
  }
}

std::vector<int> FunctionSpace::boundary_dofs(std::string_view tag) const {
  const Mesh& m = *mesh_;
  std::vector<int> out;
  for (int f : m.boundary_faces(tag)) {
    const Face& face = m.face(f);
    const auto dofs = element_dofs(face.minus);
    for (int i = 0; i < local_size(); ++i) {
      const ReferenceNode& node = basis_.nodes()[i];
      const bool on_face = (node.kind == NodeKind::Vertex &&
                            (node.entity == face.minus_local || node.entity == (face.minus_local + 1) % 3)) ||
                           (node.kind == NodeKind::Edge && node.entity == face.minus_local);
      if (on_face) out.push_back(dofs[i]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<bool> FunctionSpace::dirichlet_mask(const std::vector<std::string>& tags) const {
  std::vector<bool> mask(num_scalar_, false);
  auto mark = [&](std::string_view tag) {
    for (int d : boundary_dofs(tag)) mask[d] = true;
  };
  if (tags.empty())
    mark({});
  else
    for (const auto& t : tags) mark(t);
  return mask;
}

TaylorHoodSpaces build_taylor_hood(std::shared_ptr<const Mesh> mesh, int k) {
  if (k < 1) throw InvalidArgument("Taylor-Hood degree k must be >= 1");
  return TaylorHoodSpaces{FunctionSpace(mesh, k, 1), FunctionSpace(mesh, k, 1), FunctionSpace(mesh, k + 1, 2)};
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarFunction& f) {
  if (space.components() != 1) throw InvalidArgument("scalar interpolation into a vector space");
  Eigen::VectorXd c(space.num_dofs());
  for (int i = 0; i < space.num_scalar_dofs(); ++i) c(i) = f(space.dof_point(i));
  return c;
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorFunction& f) {
  if (space.components() != 2) throw InvalidArgument("vector interpolation into a scalar space");
  Eigen::VectorXd c(space.num_dofs());
  for (int i = 0; i < space.num_scalar_dofs(); ++i) {
    const Eigen::Vector2d v = f(space.dof_point(i));
    c(space.dof(0, i)) = v.x();
    c(space.dof(1, i)) = v.y();
  }
  return c;
}

double evaluate(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int e, const Point& ref) {
  const Eigen::VectorXd phi = space.basis().values(ref);
  const auto dofs = space.element_dofs(e);
  double v = 0.0;
  for (int i = 0; i < space.local_size(); ++i) v += coeffs(dofs[i]) * phi(i);
  return v;
}

Eigen::Vector2d evaluate_vector(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int e,
                                const Point& ref) {
  const Eigen::VectorXd phi = space.basis().values(ref);
  const auto dofs = space.element_dofs(e);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int i = 0; i < space.local_size(); ++i) {
    v.x() += coeffs(space.dof(0, dofs[i])) * phi(i);
    v.y() += coeffs(space.dof(1, dofs[i])) * phi(i);
  }
  return v;
}

QuadratureRule error_rule(const FunctionSpace& space) { return triangle_rule(2 * space.degree() + 4); }

namespace {

template <class Integrand>
double sum_over_elements(const FunctionSpace& space, const QuadratureRule& rule, Integrand&& integrand) {
  const Mesh& m = space.mesh();
  std::vector<Eigen::VectorXd> phi;
  phi.reserve(rule.size());
  for (const auto& p : rule.points) phi.push_back(space.basis().values(p));
  double total = 0.0;
  for (int e = 0; e < static_cast<int>(m.num_elements()); ++e) {
    const double det = 2.0 * m.signed_area(e);
    const auto dofs = space.element_dofs(e);
    for (std::size_t q = 0; q < rule.size(); ++q)
      total += rule.weights[q] * det * integrand(e, dofs, phi[q], m.to_physical(e, rule.points[q]));
  }
  return total;
}

} // namespace

double l2_error(const FunctionSpace& space, const Eigen::VectorXd& coeffs, const ScalarFunction& exact,
                const QuadratureRule& rule) {
  const double sq = sum_over_elements(space, rule, [&](int, std::span<const int> dofs,
                                                       const Eigen::VectorXd& phi, const Point& x) {
    double v = 0.0;
    for (int i = 0; i < space.local_size(); ++i) v += coeffs(dofs[i]) * phi(i);
    const double d = v - exact(x);
    return d * d;
  });
  return std::sqrt(sq);
}

double l2_error(const FunctionSpace& space, const Eigen::VectorXd& coeffs, const VectorFunction& exact,
                const QuadratureRule& rule) {
  const double sq = sum_over_elements(space, rule, [&](int, std::span<const int> dofs,
                                                       const Eigen::VectorXd& phi, const Point& x) {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int i = 0; i < space.local_size(); ++i) {
      v.x() += coeffs(space.dof(0, dofs[i])) * phi(i);
      v.y() += coeffs(space.dof(1, dofs[i])) * phi(i);
    }
    return (v - exact(x)).squaredNorm();
  });
  return std::sqrt(sq);
}

double integrate(const FunctionSpace& space, const Eigen::VectorXd& coeffs, const QuadratureRule& rule) {
  return sum_over_elements(space, rule,
                           [&](int, std::span<const int> dofs, const Eigen::VectorXd& phi, const Point&) {
                             double v = 0.0;
                             for (int i = 0; i < space.local_size(); ++i) v += coeffs(dofs[i]) * phi(i);
                             return v;
                           });
}

std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw InvalidArgument("convergence_order needs matching lists of length >= 2");
  std::vector<double> orders;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (!(hs[i] < hs[i - 1])) throw InvalidArgument("mesh sizes must be strictly decreasing");
    if (!(errors[i] > 0.0) || !(errors[i - 1] > 0.0))
      throw InvalidArgument("convergence order is undefined for zero errors");
    orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
  }
  return orders;
}

} // namespace vmfem
