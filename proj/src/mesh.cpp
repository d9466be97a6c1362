#include "vmfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "vmfem/errors.hpp"

namespace vmfem {

namespace {

const std::array<Point, 3> kReferenceVertices{Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

} // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> elements,
           const std::vector<EdgeTag>& tags)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("mesh has no elements");
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    for (int v : elements_[e])
      if (v < 0 || v >= nv)
        throw InvalidArgument("element " + std::to_string(e) + " references missing vertex " +
                              std::to_string(v));
    if (!(signed_area(static_cast<int>(e)) > 0.0))
      throw InvalidArgument("element " + std::to_string(e) +
                            " is not counterclockwise or is degenerate");
  }
  build_faces(tags);
}

void Mesh::build_faces(const std::vector<EdgeTag>& tags) {
  std::map<std::pair<int, int>, int> lookup;
  element_faces_.assign(elements_.size(), {-1, -1, -1});
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& tri = elements_[e];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i];
      const int b = tri[(i + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(faces_.size()));
      if (inserted) {
        Face face;
        face.vertices = {a, b};
        face.minus = static_cast<int>(e);
        face.minus_local = i;
        face.normal = outward_normal(static_cast<int>(e), i);
        face.length = (vertices_[b] - vertices_[a]).norm();
        faces_.push_back(face);
      } else {
        Face& face = faces_[it->second];
        if (face.plus >= 0)
          throw InvalidArgument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                ") is shared by more than two elements");
        face.plus = static_cast<int>(e);
        face.plus_local = i;
      }
      element_faces_[e][i] = it->second;
    }
  }

  for (std::size_t f = 0; f < faces_.size(); ++f)
    if (faces_[f].is_boundary()) boundary_tags_[static_cast<int>(f)] = "boundary";

  for (const auto& tag : tags) {
    auto it = lookup.find(edge_key(tag.a, tag.b));
    if (it == lookup.end() || !faces_[it->second].is_boundary())
      throw InvalidArgument("boundary tag '" + tag.name + "' does not name a boundary edge");
    boundary_tags_[it->second] = tag.name;
  }
}

const std::string& Mesh::boundary_tag(int f) const {
  auto it = boundary_tags_.find(f);
  if (it == boundary_tags_.end())
    throw InvalidArgument("face " + std::to_string(f) + " is not a boundary face");
  return it->second;
}

std::vector<int> Mesh::boundary_faces(std::string_view tag) const {
  std::vector<int> out;
  for (const auto& [f, name] : boundary_tags_)
    if (tag.empty() || name == tag) out.push_back(f);
  return out;
}

std::vector<std::string> Mesh::tag_names() const {
  std::vector<std::string> names;
  for (const auto& [f, name] : boundary_tags_)
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  return names;
}

Eigen::Matrix2d Mesh::jacobian(int e) const {
  const Point v0 = vertex(e, 0);
  Eigen::Matrix2d J;
  J.col(0) = vertex(e, 1) - v0;
  J.col(1) = vertex(e, 2) - v0;
  return J;
}

double Mesh::signed_area(int e) const { return 0.5 * jacobian(e).determinant(); }

Point Mesh::centroid(int e) const { return (vertex(e, 0) + vertex(e, 1) + vertex(e, 2)) / 3.0; }

Point Mesh::outward_normal(int e, int local) const {
  const Point d = vertex(e, (local + 1) % 3) - vertex(e, local);
  return Point(d.y(), -d.x()).normalized();
}

double Mesh::diameter(int e) const {
  double h = 0.0;
  for (int i = 0; i < 3; ++i) h = std::max(h, (vertex(e, (i + 1) % 3) - vertex(e, i)).norm());
  return h;
}

Point Mesh::to_physical(int e, const Point& ref) const { return vertex(e, 0) + jacobian(e) * ref; }

Point Mesh::to_reference(int e, const Point& x) const {
  return jacobian(e).inverse() * (x - vertex(e, 0));
}

bool Mesh::face_reversed(int f, int side) const {
  const Face& face = faces_[f];
  const int e = side == 0 ? face.minus : face.plus;
  const int local = side == 0 ? face.minus_local : face.plus_local;
  return elements_[e][local] != face.vertices[0];
}

Point Mesh::face_reference_point(int f, int side, double s) const {
  const Face& face = faces_[f];
  const int local = side == 0 ? face.minus_local : face.plus_local;
  const double t = face_reversed(f, side) ? 1.0 - s : s;
  return (1.0 - t) * kReferenceVertices[local] + t * kReferenceVertices[(local + 1) % 3];
}

Mesh generate_structured(int nx, int ny, const Rectangle& domain) {
  if (nx < 1 || ny < 1) throw InvalidArgument("structured mesh needs nx, ny >= 1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
    throw InvalidArgument("structured mesh needs a non-degenerate rectangle");

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(domain.x0 + domain.width() * i / nx, domain.y0 + domain.height() * j / ny);
  // Pin the far edges exactly.
  for (int j = 0; j <= ny; ++j) vertices[j * (nx + 1) + nx].x() = domain.x1;
  for (int i = 0; i <= nx; ++i) vertices[ny * (nx + 1) + i].y() = domain.y1;

  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> elements;
  elements.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int ll = id(i, j), lr = id(i + 1, j), ur = id(i + 1, j + 1), ul = id(i, j + 1);
      elements.push_back({ll, lr, ur});
      elements.push_back({ll, ur, ul});
    }

  std::vector<EdgeTag> tags;
  for (int i = 0; i < nx; ++i) {
    tags.push_back({id(i, 0), id(i + 1, 0), "bottom"});
    tags.push_back({id(i, ny), id(i + 1, ny), "top"});
  }
  for (int j = 0; j < ny; ++j) {
    tags.push_back({id(0, j), id(0, j + 1), "left"});
    tags.push_back({id(nx, j), id(nx, j + 1), "right"});
  }
  return Mesh(std::move(vertices), std::move(elements), tags);
}

double mesh_h(const Mesh& mesh) {
  double h = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    h = std::max(h, mesh.diameter(static_cast<int>(e)));
  return h;
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return line;
    }
    return {};
  };
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError("mesh: " + msg, lineno); };

  {
    std::istringstream header(next_line());
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != "vmfem-mesh" || version != 1) throw fail("expected header 'vmfem-mesh 1'");
  }

  auto read_count = [&]() {
    std::istringstream ss(next_line());
    long n = -1;
    if (!(ss >> n) || n < 0) throw fail("expected a count");
    return static_cast<std::size_t>(n);
  };

  const std::size_t nv = read_count();
  std::vector<Point> vertices(nv);
  for (auto& v : vertices) {
    std::istringstream ss(next_line());
    if (!(ss >> v.x() >> v.y())) throw fail("expected 'x y'");
  }
  const std::size_t ne = read_count();
  std::vector<std::array<int, 3>> elements(ne);
  for (auto& el : elements) {
    std::istringstream ss(next_line());
    if (!(ss >> el[0] >> el[1] >> el[2])) throw fail("expected 'i j k'");
  }
  std::vector<EdgeTag> tags;
  for (std::string l = next_line(); !l.empty(); l = next_line()) {
    std::istringstream ss(l);
    EdgeTag tag;
    if (!(ss >> tag.a >> tag.b >> tag.name)) throw fail("expected 'a b tag'");
    tags.push_back(tag);
  }
  return Mesh(std::move(vertices), std::move(elements), tags);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "vmfem-mesh 1\n" << mesh.num_vertices() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  out << mesh.num_elements() << '\n';
  for (const auto& el : mesh.elements()) out << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
  for (const auto& [f, name] : mesh.boundary_tags()) {
    const Face& face = mesh.face(f);
    out << face.vertices[0] << ' ' << face.vertices[1] << ' ' << name << '\n';
  }
}

} // namespace vmfem
