#pragma once

#include <memory>
#include <random>

#include <Eigen/Dense>

#include "vmfem/forms.hpp"
#include "vmfem/mesh.hpp"
#include "vmfem/space.hpp"

namespace vmfem::test {

inline std::shared_ptr<const TaylorHoodSpaces> spaces_on(int n, int k, Rectangle r = {}) {
  auto mesh = std::make_shared<const Mesh>(generate_structured(n, n, r));
  return std::make_shared<const TaylorHoodSpaces>(build_taylor_hood(mesh, k));
}

/// Uniform random values in [lo, hi) on the given segment.
inline void fill_uniform(Eigen::Ref<Eigen::VectorXd> v, double lo, double hi, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = d(rng);
}

/// Random physical state: scalar and T in [0.5, 1.5], velocity in [-0.5, 0.5].
inline Eigen::VectorXd random_state(const StateLayout& l, std::mt19937& rng) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(l.size());
  fill_uniform(x.segment(0, l.scalar), 0.5, 1.5, rng);
  fill_uniform(x.segment(l.offset_u(), l.velocity), -0.5, 0.5, rng);
  fill_uniform(x.segment(l.offset_T(), l.scalar), 0.5, 1.5, rng);
  return x;
}

/// max over random directions of |J d - FD(d)| / max(|J d|, |FD(d)|), central differences.
inline double jacobian_fd_error(NonlinearSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& dir,
                                double eps = 1e-6) {
  Eigen::VectorXd r, rp, rm;
  SparseMatrix J;
  sys.jacobian(x, r, J);
  const Eigen::VectorXd jd = J * dir;
  sys.residual(x + eps * dir, rp);
  sys.residual(x - eps * dir, rm);
  const Eigen::VectorXd fd = (rp - rm) / (2.0 * eps);
  const double scale = std::max(jd.norm(), fd.norm());
  return (jd - fd).norm() / (scale > 0.0 ? scale : 1.0);
}

} // namespace vmfem::test
