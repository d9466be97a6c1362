#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vmfem/mesh.hpp"

namespace vmfem {

enum class NodeKind { Vertex, Edge, Interior };

struct ReferenceNode {
  Point point;
  NodeKind kind;
  int entity; ///< local vertex or local face index; unused for interior nodes
  int position; ///< index along the edge (from its first vertex) or among interior nodes
};

/// Nodal Lagrange basis of degree k on the reference triangle with an
/// equispaced node lattice. Nodes are ordered vertices, then edge nodes
/// (local face by local face, along the face direction), then interior nodes.
class LagrangeBasis {
public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<ReferenceNode>& nodes() const { return nodes_; }

  Eigen::VectorXd values(const Point& ref) const;
  /// Row i holds the reference gradient of basis function i.
  Eigen::MatrixX2d gradients(const Point& ref) const;

private:
  int degree_;
  std::vector<ReferenceNode> nodes_;
  std::vector<std::pair<int, int>> exponents_;
  Eigen::MatrixXd coefficients_; ///< column i: monomial coefficients of basis i
};

/// Number of nodes of a degree-k Lagrange basis, (k + 1)(k + 2) / 2.
constexpr int lagrange_size(int k) { return (k + 1) * (k + 2) / 2; }

} // namespace vmfem
