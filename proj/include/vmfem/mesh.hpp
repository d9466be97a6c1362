#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vmfem {

using Point = Eigen::Vector2d;

struct Rectangle {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool operator==(const Rectangle&) const = default;
};

/// Edge of the triangulation. The minus side is the adjacent element with the
/// smaller index; on the boundary there is no plus side and the normal points
/// out of the domain.
struct Face {
  std::array<int, 2> vertices{-1, -1};
  int minus = -1;
  int plus = -1;
  int minus_local = -1; ///< local face index inside the minus element
  int plus_local = -1;
  Point normal = Point::Zero(); ///< unit normal, minus -> plus
  double length = 0.0;

  bool is_boundary() const { return plus < 0; }
};

/// Boundary tag given by the two vertex indices of a boundary edge.
struct EdgeTag {
  int a = -1;
  int b = -1;
  std::string name;
};

/// Conforming straight-sided triangulation with oriented face connectivity.
///
/// Local face `i` of an element is the edge from local vertex `i` to local
/// vertex `(i + 1) % 3`. On the reference triangle (0,0), (1,0), (0,1) that is
/// y = 0, x + y = 1 and x = 0 for i = 0, 1, 2. Immutable after construction.
class Mesh {
public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> elements,
       const std::vector<EdgeTag>& tags = {});

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }
  const std::array<int, 3>& element_faces(int e) const { return element_faces_[e]; }

  /// Tag of a boundary face; untagged boundary faces carry "boundary".
  const std::string& boundary_tag(int f) const;
  const std::map<int, std::string>& boundary_tags() const { return boundary_tags_; }
  /// Boundary faces with the given tag; an empty tag selects all of them.
  std::vector<int> boundary_faces(std::string_view tag = {}) const;
  std::vector<std::string> tag_names() const;

  Point vertex(int e, int local) const { return vertices_[elements_[e][local]]; }
  /// Columns are the edge vectors v1 - v0 and v2 - v0.
  Eigen::Matrix2d jacobian(int e) const;
  double signed_area(int e) const;
  Point centroid(int e) const;
  /// Outward unit normal of local face `local` of element `e`.
  Point outward_normal(int e, int local) const;
  double diameter(int e) const;

  Point to_physical(int e, const Point& ref) const;
  Point to_reference(int e, const Point& x) const;

  /// Reference coordinates, in the element on `side` (0 = minus, 1 = plus),
  /// of the point a fraction `s` along the face from vertices[0] to vertices[1].
  Point face_reference_point(int f, int side, double s) const;
  /// True when the element on `side` traverses the face against its stored
  /// vertex order.
  bool face_reversed(int f, int side) const;

private:
  void build_faces(const std::vector<EdgeTag>& tags);

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::map<int, std::string> boundary_tags_;
};

/// Uniform mesh of nx * ny quadrilaterals, each split along its
/// lower-left to upper-right diagonal. Boundary tags: left, right, bottom, top.
Mesh generate_structured(int nx, int ny, const Rectangle& domain);

/// Largest element diameter (longest edge).
double mesh_h(const Mesh& mesh);

/// Reads the "vmfem-mesh 1" text format.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

template <class T>
struct FaceTraces {
  std::vector<T> minus;
  std::optional<std::vector<T>> plus;
};

/// Evaluates `eval(element, reference_point)` on both sides of face `f` at the
/// face parameters `s` (fractions along the face). Plus traces are absent on
/// boundary faces. The two sides are checked to address the same physical
/// points.
template <class Eval>
auto face_sides(const Mesh& mesh, int f, std::span<const double> s, Eval&& eval)
    -> FaceTraces<decltype(eval(0, Point{}))> {
  using T = decltype(eval(0, Point{}));
  const Face& face = mesh.face(f);
  FaceTraces<T> out;
  out.minus.reserve(s.size());
  for (double si : s) out.minus.push_back(eval(face.minus, mesh.face_reference_point(f, 0, si)));
  if (face.is_boundary()) return out;

  std::vector<T> plus;
  plus.reserve(s.size());
  const double tol = 1e-12 * std::max(1.0, face.length);
  for (double si : s) {
    const Point ref_m = mesh.face_reference_point(f, 0, si);
    const Point ref_p = mesh.face_reference_point(f, 1, si);
    const Point xm = mesh.to_physical(face.minus, ref_m);
    const Point xp = mesh.to_physical(face.plus, ref_p);
    if ((xm - xp).norm() > tol)
      throw std::logic_error("face_sides: quadrature points on face " + std::to_string(f) +
                             " do not match across sides");
    plus.push_back(eval(face.plus, ref_p));
  }
  out.plus = std::move(plus);
  return out;
}

} // namespace vmfem
