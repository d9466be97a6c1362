#include "vmfem/solver.hpp"

#ifdef VMFEM_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

namespace vmfem {

struct SparseLU::Impl {
#ifdef VMFEM_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  std::vector<int> outer, inner;

  bool same_pattern(const SparseMatrix& A) const {
    return static_cast<Eigen::Index>(outer.size()) == A.outerSize() + 1 &&
           static_cast<Eigen::Index>(inner.size()) == A.nonZeros() &&
           std::equal(outer.begin(), outer.end(), A.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), A.innerIndexPtr());
  }
};

SparseLU::SparseLU() : impl_(std::make_unique<Impl>()) {}
SparseLU::~SparseLU() = default;
SparseLU::SparseLU(SparseLU&&) noexcept = default;
SparseLU& SparseLU::operator=(SparseLU&&) noexcept = default;

const char* SparseLU::backend() {
#ifdef VMFEM_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

void SparseLU::factorize(const SparseMatrix& A) {
  if (A.rows() != A.cols()) throw LinearSolverError("matrix is not square");
  if (!A.isCompressed()) throw LinearSolverError("matrix must be compressed");
  if (!impl_) impl_ = std::make_unique<Impl>();
  factorized_ = false;
  if (!impl_->same_pattern(A)) {
    impl_->lu.analyzePattern(A);
    impl_->outer.assign(A.outerIndexPtr(), A.outerIndexPtr() + A.outerSize() + 1);
    impl_->inner.assign(A.innerIndexPtr(), A.innerIndexPtr() + A.nonZeros());
  }
  impl_->lu.factorize(A);
  if (impl_->lu.info() != Eigen::Success) {
    impl_->outer.clear();
    throw LinearSolverError("sparse LU factorization failed (singular matrix)");
  }
  factorized_ = true;
}

Eigen::VectorXd SparseLU::solve(const Eigen::VectorXd& b) const {
  if (!factorized_) throw LinearSolverError("solve called before factorize");
  Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) throw LinearSolverError("sparse LU solve failed");
  return x;
}

Eigen::VectorXd sparse_lu_solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  if (b.size() != A.rows()) throw InvalidArgument("right-hand side has the wrong size");
  SparseMatrix M = A;
  M.makeCompressed();
  SparseLU lu;
  lu.factorize(M);
  Eigen::VectorXd x = lu.solve(b);
  const double bn = b.norm();
  const double res = (A * x - b).norm();
  if (res > 1e-10 * (bn > 0.0 ? bn : 1.0))
    throw LinearSolverError("sparse LU residual " + std::to_string(res / (bn > 0.0 ? bn : 1.0)) +
                            " exceeds 1e-10 (matrix is singular or badly conditioned)");
  return x;
}

} // namespace vmfem
