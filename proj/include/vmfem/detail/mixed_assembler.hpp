#pragma once

// Element/face assembly machinery shared by the compressible and
// incompressible forms. Both forms use the unknown layout
//   [scalar field A (degree k) | u_x | u_y (degree k + 1) | T (degree k) | extras]
// where A is the density or the kinematic pressure.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vmfem/dual.hpp"
#include "vmfem/errors.hpp"
#include "vmfem/quadrature.hpp"
#include "vmfem/space.hpp"
#include "vmfem/system.hpp"

namespace vmfem::detail {

/// Basis values and reference gradients at a list of reference points.
struct BasisTable {
  int n = 0;
  std::vector<double> phi;   ///< [q * n + i]
  std::vector<double> dphi;  ///< [(q * n + i) * 2 + d]

  void build(const LagrangeBasis& basis, const std::vector<Point>& pts);
};

/// Physical gradients of one basis at one point: gx[i], gy[i].
struct PhysGrad {
  std::vector<double> gx, gy;
  void compute(const BasisTable& t, int q, const Eigen::Matrix2d& jinv_t);
};

/// Runs f, attaching the element id to InvalidState errors that lack one.
template <class F>
void tag_element(int e, F&& f) {
  try {
    f();
  } catch (const InvalidState& err) {
    if (err.element() >= 0) throw;
    throw InvalidState(err.what(), e);
  }
}

template <class S>
struct Seeder;

template <>
struct Seeder<double> {
  static double combine(const double* c, const double* w, int n, int) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += c[i] * w[i];
    return v;
  }
  static void accumulate(double& r, double a, double x) { r += a * x; }
};

template <int N>
struct Seeder<Dual<N>> {
  static Dual<N> combine(const double* c, const double* w, int n, int offset) {
    Dual<N> r;
    for (int i = 0; i < n; ++i) {
      r.v += c[i] * w[i];
      r.d[offset + i] = w[i];
    }
    return r;
  }
  static void accumulate(Dual<N>& r, double a, const Dual<N>& x) { r.add_scaled(a, x); }
};

/// Time-level data handed to the kernels.
struct TimeData {
  double time = 0.0;
  double dt = 1.0;
  std::vector<double> alpha{0.0};
  int levels() const { return static_cast<int>(alpha.size()) - 1; }
};

struct ElementGeometry {
  int element = -1;
  double det = 0.0;
  Eigen::Matrix2d jinv_t;
};

struct FaceSide {
  int element = -1;
  int table = -1; ///< index into face tables: local_face * 2 + reversed
  Eigen::Matrix2d jinv_t;
  Eigen::Vector2d normal; ///< outward from this element
};

struct FaceGeometry {
  int face = -1;
  Eigen::Vector2d normal_f; ///< minus -> plus
  double length = 0.0;
  FaceSide minus, plus;
  bool boundary = true;
};

class MixedAssembler {
public:
  MixedAssembler(const TaylorHoodSpaces& spaces, int quad_degree, int extras = 0);

  const TaylorHoodSpaces& spaces() const { return *spaces_; }
  const Mesh& mesh() const { return spaces_->mesh(); }
  int ns() const { return ns_; }
  int nv() const { return nv_; }
  int local_size() const { return 2 * ns_ + 2 * nv_; }
  int scalar_dofs() const { return nsd_; }
  int vector_dofs() const { return 2 * nvd_; }
  int offset_u() const { return nsd_; }
  int offset_T() const { return nsd_ + 2 * nvd_; }
  int offset_extra() const { return 2 * nsd_ + 2 * nvd_; }
  int size() const { return offset_extra() + extras_; }

  const QuadratureRule& volume_rule() const { return volume_rule_; }
  const EdgeRule& edge_rule() const { return edge_rule_; }
  const BasisTable& scalar_volume() const { return scalar_vol_; }
  const BasisTable& vector_volume() const { return vector_vol_; }
  const BasisTable& scalar_face(int t) const { return scalar_face_[t]; }
  const BasisTable& vector_face(int t) const { return vector_face_[t]; }

  std::span<const int> element_map(int e) const {
    return {l2g_.data() + static_cast<std::size_t>(e) * local_size(), static_cast<std::size_t>(local_size())};
  }
  const ElementGeometry& element_geometry(int e) const { return elem_geom_[e]; }
  const FaceGeometry& face_geometry(int f) const { return face_geom_[f]; }
  const std::vector<std::vector<Point>>& volume_points() const { return volume_points_; }

  /// Adds full row/column coupling between an extra unknown and global dofs.
  void couple_extra(int extra, std::span<const int> dofs);
  /// Finalizes the sparsity pattern. Must be called after all couple_extra.
  void finalize_pattern();
  const SparseMatrix& pattern() const { return pattern_; }
  /// Value index of entry (row, col) in the pattern; throws if absent.
  int entry(int row, int col) const;

  void set_dirichlet(std::vector<int> dofs);
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }
  /// r_g = x_g - value_g and identity rows in J for every constrained dof.
  void apply_dirichlet(const Eigen::VectorXd& x, const Eigen::VectorXd& values, Eigen::VectorXd& r,
                       SparseMatrix* J) const;

  void gather(const Eigen::VectorXd& x, int e, double* out) const {
    const auto map = element_map(e);
    for (int i = 0; i < local_size(); ++i) out[i] = x(map[i]);
  }

  /// Residual assembly over elements and faces.
  template <class Kernel>
  void assemble_residual(const Kernel& kernel, const Eigen::VectorXd& x,
                         const std::vector<const Eigen::VectorXd*>& history, Eigen::VectorXd& r) const;

  /// Residual and Jacobian, local kernels differentiated with Dual<NL>.
  template <int NL, class Kernel>
  void assemble_jacobian(const Kernel& kernel, const Eigen::VectorXd& x,
                         const std::vector<const Eigen::VectorXd*>& history, Eigen::VectorXd& r,
                         SparseMatrix& J) const;

private:
  const TaylorHoodSpaces* spaces_;
  int ns_ = 0, nv_ = 0, nsd_ = 0, nvd_ = 0, extras_ = 0;
  QuadratureRule volume_rule_;
  EdgeRule edge_rule_;
  BasisTable scalar_vol_, vector_vol_;
  std::array<BasisTable, 6> scalar_face_, vector_face_;
  std::vector<int> l2g_;
  std::vector<ElementGeometry> elem_geom_;
  std::vector<FaceGeometry> face_geom_;
  std::vector<std::vector<Point>> volume_points_;
  std::vector<std::vector<int>> extra_coupling_;
  SparseMatrix pattern_;
  std::vector<int> elem_index_; ///< value indices, NL * NL per element
  std::vector<int> face_index_; ///< value indices, (2NL)^2 per interior face
  std::vector<int> face_index_offset_;
  std::vector<int> dirichlet_;
  std::vector<std::vector<int>> dirichlet_row_entries_;
  std::vector<int> dirichlet_diag_;
};

template <class Kernel>
void MixedAssembler::assemble_residual(const Kernel& kernel, const Eigen::VectorXd& x,
                                       const std::vector<const Eigen::VectorXd*>& history,
                                       Eigen::VectorXd& r) const {
  const int nl = local_size();
  r.setZero(size());
  std::vector<double> xl(nl), xp(nl), rl(2 * nl);
  std::vector<std::vector<double>> hl(history.size(), std::vector<double>(nl));
  std::vector<const double*> hp(history.size());

  const Mesh& m = mesh();
  for (int e = 0; e < static_cast<int>(m.num_elements()); ++e) {
    gather(x, e, xl.data());
    for (std::size_t h = 0; h < history.size(); ++h) {
      gather(*history[h], e, hl[h].data());
      hp[h] = hl[h].data();
    }
    std::fill(rl.begin(), rl.end(), 0.0);
    tag_element(e, [&] { kernel.template volume<double>(elem_geom_[e], xl.data(), hp, rl.data()); });
    const auto map = element_map(e);
    for (int i = 0; i < nl; ++i) {
      if (!std::isfinite(rl[i])) throw InvalidState("non-finite residual", e);
      r(map[i]) += rl[i];
    }
  }
  for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
    const FaceGeometry& fg = face_geom_[f];
    gather(x, fg.minus.element, xl.data());
    if (!fg.boundary) gather(x, fg.plus.element, xp.data());
    std::fill(rl.begin(), rl.end(), 0.0);
    tag_element(fg.minus.element,
                [&] { kernel.template face<double>(fg, xl.data(), fg.boundary ? nullptr : xp.data(), rl.data()); });
    const auto mm = element_map(fg.minus.element);
    for (int i = 0; i < nl; ++i) {
      if (!std::isfinite(rl[i])) throw InvalidState("non-finite face residual", fg.minus.element);
      r(mm[i]) += rl[i];
    }
    if (!fg.boundary) {
      const auto pm = element_map(fg.plus.element);
      for (int i = 0; i < nl; ++i) {
        if (!std::isfinite(rl[nl + i])) throw InvalidState("non-finite face residual", fg.plus.element);
        r(pm[i]) += rl[nl + i];
      }
    }
  }
}

template <int NL, class Kernel>
void MixedAssembler::assemble_jacobian(const Kernel& kernel, const Eigen::VectorXd& x,
                                       const std::vector<const Eigen::VectorXd*>& history,
                                       Eigen::VectorXd& r, SparseMatrix& J) const {
  if (NL != local_size()) throw std::logic_error("assemble_jacobian: local size mismatch");
  using VDual = Dual<NL>;
  using FDual = Dual<2 * NL>;

  if (J.rows() != pattern_.rows() || J.nonZeros() != pattern_.nonZeros()) J = pattern_;
  std::fill(J.valuePtr(), J.valuePtr() + J.nonZeros(), 0.0);
  double* vals = J.valuePtr();
  r.setZero(size());

  std::vector<double> xl(NL), xp(NL);
  std::vector<std::vector<double>> hl(history.size(), std::vector<double>(NL));
  std::vector<const double*> hp(history.size());
  std::vector<VDual> rv(NL);
  std::vector<FDual> rf(2 * NL);

  const Mesh& m = mesh();
  for (int e = 0; e < static_cast<int>(m.num_elements()); ++e) {
    gather(x, e, xl.data());
    for (std::size_t h = 0; h < history.size(); ++h) {
      gather(*history[h], e, hl[h].data());
      hp[h] = hl[h].data();
    }
    for (auto& v : rv) v = VDual{};
    tag_element(e, [&] { kernel.template volume<VDual>(elem_geom_[e], xl.data(), hp, rv.data()); });
    const auto map = element_map(e);
    const int* idx = elem_index_.data() + static_cast<std::size_t>(e) * NL * NL;
    for (int i = 0; i < NL; ++i) {
      if (!std::isfinite(rv[i].v)) throw InvalidState("non-finite residual", e);
      r(map[i]) += rv[i].v;
      for (int j = 0; j < NL; ++j) vals[idx[i * NL + j]] += rv[i].d[j];
    }
  }
  for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
    const FaceGeometry& fg = face_geom_[f];
    gather(x, fg.minus.element, xl.data());
    if (!fg.boundary) gather(x, fg.plus.element, xp.data());
    for (auto& v : rf) v = FDual{};
    tag_element(fg.minus.element,
                [&] { kernel.template face<FDual>(fg, xl.data(), fg.boundary ? nullptr : xp.data(), rf.data()); });
    const auto mm = element_map(fg.minus.element);
    if (fg.boundary) {
      const int* idx = elem_index_.data() + static_cast<std::size_t>(fg.minus.element) * NL * NL;
      for (int i = 0; i < NL; ++i) {
        if (!std::isfinite(rf[i].v)) throw InvalidState("non-finite face residual", fg.minus.element);
        r(mm[i]) += rf[i].v;
        for (int j = 0; j < NL; ++j) vals[idx[i * NL + j]] += rf[i].d[j];
      }
      continue;
    }
    const auto pm = element_map(fg.plus.element);
    const int* idx = face_index_.data() + face_index_offset_[f];
    for (int i = 0; i < 2 * NL; ++i) {
      if (!std::isfinite(rf[i].v)) throw InvalidState("non-finite face residual", fg.minus.element);
      r(i < NL ? mm[i] : pm[i - NL]) += rf[i].v;
      for (int j = 0; j < 2 * NL; ++j) vals[idx[i * 2 * NL + j]] += rf[i].d[j];
    }
  }
}

} // namespace vmfem::detail
