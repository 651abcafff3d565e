#include "qfi/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <string>

#include "qfi/errors.hpp"

namespace qfi {

EigResult hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw ArgumentError("hermitian_eig: matrix must be square and non-empty");
  if (!is_hermitian(m, tol.herm)) throw ArgumentError("hermitian_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw ArgumentError("hermitian_eig: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, const Tolerances& tol) {
  EigResult eig = hermitian_eig(m, tol);
  RealVector lam = eig.values;
  // Eigenvalues that are pure rounding dust must be flushed before the square
  // root: sqrt(1e-17) = 3e-9 would contaminate the root of a rank-deficient
  // input far above working precision.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -tol.psd)
      throw ArgumentError("matrix_sqrt_psd: eigenvalue " + std::to_string(lam(i)) +
                          " below the PSD floor");
    lam(i) = lam(i) > floor ? std::sqrt(lam(i)) : 0.0;
  }
  ComplexMatrix root = eig.vectors * lam.asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(root);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b,
                               const Tolerances& tol) {
  const Eigen::Index dim = a.dim() * b.dim();
  if (dim > kMaxDenseDim)
    throw ResourceError("tensor_product: composite dimension " + std::to_string(dim) +
                        " exceeds the dense budget " + std::to_string(kMaxDenseDim));
  return DensityOperator(kron(a.matrix(), b.matrix()), tol);
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, Eigen::Index dim_a,
                                   Eigen::Index dim_b, Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b || m.rows() != m.cols())
    throw ArgumentError("partial_trace: matrix shape does not match dim_a * dim_b");
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index k = 0; k < dim_b; ++k)
    for (Eigen::Index l = 0; l < dim_b; ++l)
      for (Eigen::Index i = 0; i < dim_a; ++i)
        out(k, l) += m(i * dim_b + k, i * dim_b + l);
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Eigen::Index dim_a,
                              Eigen::Index dim_b, Subsystem keep, const Tolerances& tol) {
  return DensityOperator(partial_trace_matrix(rho.matrix(), dim_a, dim_b, keep), tol);
}

}  // namespace qfi
