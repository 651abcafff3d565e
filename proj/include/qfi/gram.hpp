#pragma once

#include <vector>

#include "qfi/states.hpp"

namespace qfi {

/// QFI machinery for a state given as an ensemble rho = sum_i p_i(x) |psi_i><psi_i|
/// with fixed, generally non-orthogonal |psi_i> and evolving weights. Works in
/// the rescaled basis phi_i = sqrt(p_i) psi_i, where the coefficient matrix R
/// is the identity and only the N x N Gram matrix S_ij = <phi_i|phi_j> enters;
/// the ambient dimension never appears in the solve.
class GramSystem {
 public:
  /// Validates inputs and assembles S, R, D. Weights must exceed tol.prob
  /// (SingularError otherwise); the rescaled Gram matrix must have smallest
  /// eigenvalue above tol.gram (ArgumentError otherwise, the ensemble being
  /// linearly dependent for practical purposes).
  static GramSystem build(const std::vector<PureState>& basis, const RealVector& probs,
                          const RealVector& dprobs, const Tolerances& tol = {});

  /// build + solve in one step.
  static GramSystem from_ensemble(const std::vector<PureState>& basis,
                                  const RealVector& probs, const RealVector& dprobs,
                                  const Tolerances& tol = {});

  /// Solves the compressed SLD equation 2D = RSL + LSR for Hermitian L by
  /// vectorization, then forms M = SL. Throws StateError when the defining
  /// residual survives above tol.sld.
  void solve();
  bool solved() const { return solved_; }

  Eigen::Index size() const { return S_.rows(); }  // ensemble size N
  Eigen::Index dim() const { return dim_; }        // ambient dimension

  const std::vector<PureState>& basis() const { return basis_; }
  const RealVector& probs() const { return probs_; }
  const RealVector& dprobs() const { return dprobs_; }
  const ComplexMatrix& S() const { return S_; }
  const ComplexMatrix& R() const { return R_; }
  const ComplexMatrix& D() const { return D_; }
  const ComplexMatrix& L() const;  // StateError until solved
  const ComplexMatrix& M() const;  // M = SL, StateError until solved

 private:
  GramSystem() = default;

  Eigen::Index dim_ = 0;
  std::vector<PureState> basis_;
  RealVector probs_, dprobs_;
  ComplexMatrix S_, R_, D_, L_, M_;
  bool solved_ = false;
  Tolerances tol_;
};

/// QFI from the solved compressed system, Re Tr(S L S L S R).
double gram_qfi(const GramSystem& sys);

/// QFI as classical term minus overlap correction,
/// sum (dp_i)^2/p_i - (1/2) Re sum_ij S_ij (dp_i/p_i - dp_j/p_j) M_ji,
/// with M = SL from a solved system.
double decomposed_qfi(const RealVector& probs, const RealVector& dprobs,
                    const ComplexMatrix& S, const ComplexMatrix& L,
                    const Tolerances& tol = {});

}  // namespace qfi
