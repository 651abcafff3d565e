#include "qfi/states.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>

#include "qfi/errors.hpp"

namespace qfi {

PureState::PureState(ComplexVector amplitudes, const Tolerances& tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ArgumentError("pure state: empty amplitude vector");
  if (!amplitudes_.allFinite()) throw ArgumentError("pure state: non-finite amplitude");
  const double n = amplitudes_.norm();
  if (std::abs(n - 1.0) > tol.norm)
    throw ArgumentError("pure state: norm " + std::to_string(n) + " is not 1");
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index k, const Tolerances& tol) {
  if (k < 0 || k >= dim) throw ArgumentError("basis state index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v), tol);
}

DensityOperator::DensityOperator(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw ArgumentError("density matrix must be square and non-empty");
  if (!m.allFinite()) throw ArgumentError("density matrix has non-finite entries");
  if (max_abs(m - m.adjoint()) > tol.herm)
    throw ArgumentError("density matrix is not Hermitian within tolerance");

  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    throw ArgumentError("density matrix trace " + std::to_string(tr) + " is not 1");

  matrix_ = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_);
  if (es.info() != Eigen::Success)
    throw ArgumentError("density matrix eigendecomposition failed");

  eigenvalues_ = es.eigenvalues();
  const double lo = eigenvalues_.minCoeff();
  if (lo < -tol.psd)
    throw ArgumentError("density matrix has eigenvalue " + std::to_string(lo) +
                        " below the PSD floor");
  if (lo < 0.0) {
    // Clamp the representable negative dust and rebuild.
    eigenvalues_ = eigenvalues_.cwiseMax(0.0);
    matrix_ = es.eigenvectors() * eigenvalues_.asDiagonal() *
              es.eigenvectors().adjoint();
    matrix_ = hermitian_part(matrix_);
  }
}

DensityOperator DensityOperator::from_pure(const PureState& psi, const Tolerances& tol) {
  return DensityOperator(psi.projector(), tol);
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim, const Tolerances& tol) {
  if (dim <= 0) throw ArgumentError("maximally mixed state needs dim >= 1");
  return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), tol);
}

DensityOperator DensityOperator::from_populations(const RealVector& populations,
                                                  const Tolerances& tol) {
  ComplexMatrix m = ComplexMatrix::Zero(populations.size(), populations.size());
  m.diagonal() = populations.cast<Complex>();
  return DensityOperator(m, tol);
}

AuxiliaryState::AuxiliaryState(DensityOperator state, RealVector weights)
    : state_(std::move(state)), weights_(std::move(weights)) {}

AuxiliaryState AuxiliaryState::from_density(DensityOperator state) {
  RealVector w = state.eigenvalues();
  return AuxiliaryState(std::move(state), std::move(w));
}

}  // namespace qfi
