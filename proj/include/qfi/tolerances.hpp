#pragma once

#include <Eigen/Core>

namespace qfi {

/// Numerical thresholds shared across the toolkit. Every routine that needs a
/// cutoff takes one of these (defaulted), so a caller can tighten or relax the
/// whole stack coherently.
struct Tolerances {
  double herm = 1e-10;    // max |M - M^dag| entry accepted as Hermitian
  double trace = 1e-10;   // unit-trace / traceless slack
  double psd = 1e-10;     // eigenvalues in [-psd, 0) are clamped to 0, below is an error
  double norm = 1e-10;    // pure-state normalization slack
  double eig = 1e-9;      // eigendecomposition reconstruction residual
  double metric = 1e-8;   // scalar metric comparisons
  double prob = 1e-12;    // probabilities at or below this count as zero
  double pure = 1e-9;     // 1 - Tr(rho^2) below this selects the pure-state branch
  double kernel = 1e-10;  // lambda_j + lambda_k at or below this is kernel, skip the pair
  double sld = 1e-8;      // SLD defining-equation residual / significance threshold
  double degen = 1e-8;    // eigenvalues closer than this share a projector
  double gram = 1e-10;    // smallest Gram eigenvalue accepted as linearly independent
  double proj = 1e-10;    // projector idempotence / orthogonality / completeness slack
  double proto = 1e-10;   // agreement required between the two protocol evaluation paths
  double chain = 1e-7;    // slack on the information-transfer inequality chain
  double cross = 1e-7;    // agreement required between independent QFI solvers
};

/// Hard cap on dense matrix dimension; anything bigger is out of scope for an
/// exact-diagonalization toolkit and gets rejected up front.
inline constexpr Eigen::Index kMaxDenseDim = 4096;

}  // namespace qfi
