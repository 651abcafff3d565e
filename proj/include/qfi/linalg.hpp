#pragma once

#include "qfi/complex_matrix.hpp"
#include "qfi/states.hpp"
#include "qfi/tolerances.hpp"

namespace qfi {

/// Eigendecomposition of a Hermitian matrix: m = vectors * diag(values) * vectors^dag,
/// values ascending, vectors unitary.
struct EigResult {
  RealVector values;
  ComplexMatrix vectors;
};

EigResult hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-tol.psd, 0) are treated as zero; lower ones are an error.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, const Tolerances& tol = {});

/// Kronecker product, row-major subsystem convention: (A x B)[i*db+k, j*db+l] = A[i,j] B[k,l].
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b,
                               const Tolerances& tol = {});

enum class Subsystem { A, B };

/// Trace out one factor of a bipartite matrix living on dim_a x dim_b.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, Eigen::Index dim_a,
                                   Eigen::Index dim_b, Subsystem keep);

DensityOperator partial_trace(const DensityOperator& rho, Eigen::Index dim_a,
                              Eigen::Index dim_b, Subsystem keep,
                              const Tolerances& tol = {});

}  // namespace qfi
