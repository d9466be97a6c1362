#include "vmfem/detail/mixed_assembler.hpp"

#include <algorithm>
#include <stdexcept>

namespace vmfem::detail {

void BasisTable::build(const LagrangeBasis& basis, const std::vector<Point>& pts) {
  n = basis.size();
  phi.assign(pts.size() * n, 0.0);
  dphi.assign(pts.size() * n * 2, 0.0);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const Eigen::VectorXd v = basis.values(pts[q]);
    const Eigen::MatrixX2d g = basis.gradients(pts[q]);
    for (int i = 0; i < n; ++i) {
      phi[q * n + i] = v(i);
      dphi[(q * n + i) * 2] = g(i, 0);
      dphi[(q * n + i) * 2 + 1] = g(i, 1);
    }
  }
}

void PhysGrad::compute(const BasisTable& t, int q, const Eigen::Matrix2d& jinv_t) {
  gx.resize(t.n);
  gy.resize(t.n);
  const double* d = t.dphi.data() + static_cast<std::size_t>(q) * t.n * 2;
  for (int i = 0; i < t.n; ++i) {
    gx[i] = jinv_t(0, 0) * d[2 * i] + jinv_t(0, 1) * d[2 * i + 1];
    gy[i] = jinv_t(1, 0) * d[2 * i] + jinv_t(1, 1) * d[2 * i + 1];
  }
}

namespace {

const std::array<Point, 3> kRefVertices{Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

std::vector<Point> face_points(const EdgeRule& rule, int local_face, bool reversed) {
  const Point a = kRefVertices[local_face];
  const Point b = kRefVertices[(local_face + 1) % 3];
  std::vector<Point> pts;
  for (double s : rule.points) {
    const double t = reversed ? 1.0 - s : s;
    pts.push_back(a + t * (b - a));
  }
  return pts;
}

} // namespace

MixedAssembler::MixedAssembler(const TaylorHoodSpaces& spaces, int quad_degree, int extras)
    : spaces_(&spaces), extras_(extras) {
  if (extras < 0) throw InvalidArgument("negative number of extra unknowns");
  ns_ = spaces.density.local_size();
  nv_ = spaces.velocity.local_size();
  nsd_ = spaces.density.num_scalar_dofs();
  nvd_ = spaces.velocity.num_scalar_dofs();
  volume_rule_ = triangle_rule(quad_degree);
  edge_rule_ = vmfem::edge_rule(quad_degree);
  scalar_vol_.build(spaces.density.basis(), volume_rule_.points);
  vector_vol_.build(spaces.velocity.basis(), volume_rule_.points);
  for (int lf = 0; lf < 3; ++lf)
    for (int rv = 0; rv < 2; ++rv) {
      const auto pts = face_points(edge_rule_, lf, rv == 1);
      scalar_face_[lf * 2 + rv].build(spaces.density.basis(), pts);
      vector_face_[lf * 2 + rv].build(spaces.velocity.basis(), pts);
    }

  const Mesh& m = mesh();
  const int ne = static_cast<int>(m.num_elements());
  const int nl = local_size();
  l2g_.resize(static_cast<std::size_t>(ne) * nl);
  elem_geom_.resize(ne);
  volume_points_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto sd = spaces.density.element_dofs(e);
    const auto td = spaces.temperature.element_dofs(e);
    const auto vd = spaces.velocity.element_dofs(e);
    int* map = l2g_.data() + static_cast<std::size_t>(e) * nl;
    for (int i = 0; i < ns_; ++i) map[i] = sd[i];
    for (int i = 0; i < nv_; ++i) {
      map[ns_ + i] = offset_u() + vd[i];
      map[ns_ + nv_ + i] = offset_u() + nvd_ + vd[i];
    }
    for (int i = 0; i < ns_; ++i) map[ns_ + 2 * nv_ + i] = offset_T() + td[i];

    const Eigen::Matrix2d jac = m.jacobian(e);
    elem_geom_[e].element = e;
    elem_geom_[e].det = std::abs(jac.determinant());
    elem_geom_[e].jinv_t = jac.inverse().transpose();
    for (const Point& p : volume_rule_.points) volume_points_[e].push_back(m.to_physical(e, p));
  }

  face_geom_.resize(m.num_faces());
  for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
    const Face& face = m.face(f);
    FaceGeometry& g = face_geom_[f];
    g.face = f;
    g.normal_f = face.normal;
    g.length = face.length;
    g.boundary = face.is_boundary();
    auto side = [&](int s, int elem, int local) {
      FaceSide fs;
      fs.element = elem;
      const bool rv = m.face_reversed(f, s);
      fs.table = local * 2 + (rv ? 1 : 0);
      fs.jinv_t = elem_geom_[elem].jinv_t;
      fs.normal = s == 0 ? Eigen::Vector2d(face.normal) : Eigen::Vector2d(-face.normal);
      const auto pts = face_points(edge_rule_, local, rv);
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const Point expect = m.face_reference_point(f, s, edge_rule_.points[q]);
        if ((expect - pts[q]).norm() > 1e-12)
          throw std::logic_error("face quadrature tables disagree with mesh orientation");
      }
      return fs;
    };
    g.minus = side(0, face.minus, face.minus_local);
    if (!g.boundary) g.plus = side(1, face.plus, face.plus_local);
  }
  extra_coupling_.assign(extras_, {});
}

void MixedAssembler::couple_extra(int extra, std::span<const int> dofs) {
  if (extra < 0 || extra >= extras_) throw InvalidArgument("extra unknown out of range");
  auto& list = extra_coupling_[extra];
  list.insert(list.end(), dofs.begin(), dofs.end());
}

void MixedAssembler::finalize_pattern() {
  const Mesh& m = mesh();
  const int ne = static_cast<int>(m.num_elements());
  const int nl = local_size();
  const int n = size();

  std::vector<std::vector<int>> neighbors(ne);
  for (int e = 0; e < ne; ++e) neighbors[e].push_back(e);
  for (const Face& f : m.faces())
    if (!f.is_boundary()) {
      neighbors[f.minus].push_back(f.plus);
      neighbors[f.plus].push_back(f.minus);
    }

  std::vector<std::vector<int>> cols(n);
  for (int e = 0; e < ne; ++e) {
    const auto map = element_map(e);
    for (int nb : neighbors[e]) {
      const auto other = element_map(nb);
      for (int j = 0; j < nl; ++j) cols[map[j]].insert(cols[map[j]].end(), other.begin(), other.end());
    }
  }
  for (int x = 0; x < extras_; ++x) {
    const int row = offset_extra() + x;
    for (int d : extra_coupling_[x]) {
      cols[d].push_back(row);
      cols[row].push_back(d);
    }
  }
  for (int c = 0; c < n; ++c) cols[c].push_back(c);

  std::vector<int> outer(n + 1, 0);
  for (int c = 0; c < n; ++c) {
    auto& v = cols[c];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    outer[c + 1] = outer[c] + static_cast<int>(v.size());
  }
  std::vector<int> inner;
  inner.reserve(outer[n]);
  for (int c = 0; c < n; ++c) {
    inner.insert(inner.end(), cols[c].begin(), cols[c].end());
    std::vector<int>().swap(cols[c]);
  }
  std::vector<double> values(inner.size(), 0.0);
  pattern_ = Eigen::Map<const SparseMatrix>(n, n, static_cast<Eigen::Index>(inner.size()), outer.data(),
                                            inner.data(), values.data());
  pattern_.makeCompressed();

  elem_index_.resize(static_cast<std::size_t>(ne) * nl * nl);
  for (int e = 0; e < ne; ++e) {
    const auto map = element_map(e);
    int* idx = elem_index_.data() + static_cast<std::size_t>(e) * nl * nl;
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) idx[i * nl + j] = entry(map[i], map[j]);
  }
  face_index_offset_.assign(m.num_faces(), -1);
  face_index_.clear();
  for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
    const Face& face = m.face(f);
    if (face.is_boundary()) continue;
    face_index_offset_[f] = static_cast<int>(face_index_.size());
    std::vector<int> both(element_map(face.minus).begin(), element_map(face.minus).end());
    const auto pm = element_map(face.plus);
    both.insert(both.end(), pm.begin(), pm.end());
    for (int a : both)
      for (int b : both) face_index_.push_back(entry(a, b));
  }
}

int MixedAssembler::entry(int row, int col) const {
  const int* inner = pattern_.innerIndexPtr();
  const int* begin = inner + pattern_.outerIndexPtr()[col];
  const int* end = inner + pattern_.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(begin, end, row);
  if (it == end || *it != row)
    throw std::logic_error("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                           ") missing from sparsity pattern");
  return static_cast<int>(it - inner);
}

void MixedAssembler::set_dirichlet(std::vector<int> dofs) {
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  dirichlet_ = std::move(dofs);
  dirichlet_row_entries_.assign(dirichlet_.size(), {});
  dirichlet_diag_.assign(dirichlet_.size(), -1);
  for (std::size_t k = 0; k < dirichlet_.size(); ++k) {
    const int g = dirichlet_[k];
    // The pattern is structurally symmetric, so the columns of row g are the
    // rows of column g.
    for (SparseMatrix::InnerIterator it(pattern_, g); it; ++it)
      dirichlet_row_entries_[k].push_back(entry(g, static_cast<int>(it.row())));
    dirichlet_diag_[k] = entry(g, g);
  }
}

void MixedAssembler::apply_dirichlet(const Eigen::VectorXd& x, const Eigen::VectorXd& values,
                                     Eigen::VectorXd& r, SparseMatrix* J) const {
  for (std::size_t k = 0; k < dirichlet_.size(); ++k) {
    const int g = dirichlet_[k];
    r(g) = x(g) - values(g);
    if (J) {
      double* v = J->valuePtr();
      for (int idx : dirichlet_row_entries_[k]) v[idx] = 0.0;
      v[dirichlet_diag_[k]] = 1.0;
    }
  }
}

} // namespace vmfem::detail
