#pragma once

#include <utility>
#include <vector>

#include "qfi/measurement.hpp"
#include "qfi/states.hpp"

namespace qfi {

struct SldResult {
  ComplexMatrix sld;  // L in the computational basis, exactly Hermitian
  double qfi = 0.0;   // Tr(rho L^2) accumulated on the retained support
  /// Eigenvalue index pairs dropped because lambda_j + lambda_k fell at or
  /// below tol.kernel.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> skipped_pairs;
};

/// Symmetric logarithmic derivative from the spectral decomposition of rho:
/// in the eigenbasis, L_jk = 2 (drho)_jk / (lambda_j + lambda_k) wherever the
/// denominator exceeds tol.kernel. A dropped pair carrying derivative weight
/// above tol.sld means the state's rank changes at this point and no SLD
/// exists on the support; that raises RankChangeError.
SldResult sld_spectral(const DensityOperator& rho, const ComplexMatrix& drho,
                       const Tolerances& tol = {});

/// Projective measurement onto the SLD eigenspaces, eigenvalues merged within
/// tol.degen. Saturates the classical Fisher information at this point.
ProjectiveMeasurement optimal_measurement(const DensityOperator& rho,
                                          const ComplexMatrix& drho,
                                          const Tolerances& tol = {});

}  // namespace qfi
