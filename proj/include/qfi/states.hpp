#pragma once

#include "qfi/complex_matrix.hpp"
#include "qfi/tolerances.hpp"

namespace qfi {

/// Normalized state vector. Validated once at construction.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes, const Tolerances& tol = {});

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

  /// Computational basis state |k>.
  static PureState basis(Eigen::Index dim, Eigen::Index k, const Tolerances& tol = {});

 private:
  ComplexVector amplitudes_;
};

/// Density matrix with its defining properties enforced at construction:
/// Hermitian within tol.herm, unit trace within tol.trace, and positive
/// semidefinite up to eigenvalues no lower than -tol.psd (those are clamped to
/// zero and the matrix rebuilt). The stored matrix is exactly Hermitian.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m, const Tolerances& tol = {});

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Eigenvalues ascending, as clamped during validation. All >= 0.
  const RealVector& eigenvalues() const { return eigenvalues_; }

  static DensityOperator from_pure(const PureState& psi, const Tolerances& tol = {});
  static DensityOperator maximally_mixed(Eigen::Index dim, const Tolerances& tol = {});
  /// Diagonal state from a probability vector.
  static DensityOperator from_populations(const RealVector& populations,
                                          const Tolerances& tol = {});

 private:
  ComplexMatrix matrix_;
  RealVector eigenvalues_;
};

/// Auxiliary-system input to the information-transfer protocol: a state
/// together with its eigenvalue weights (the convex weights of its spectral
/// ensemble).
class AuxiliaryState {
 public:
  static AuxiliaryState from_density(DensityOperator state);

  const DensityOperator& state() const { return state_; }
  const RealVector& eigen_weights() const { return weights_; }
  Eigen::Index dim() const { return state_.dim(); }

 private:
  AuxiliaryState(DensityOperator state, RealVector weights);

  DensityOperator state_;
  RealVector weights_;
};

}  // namespace qfi
