#pragma once

#include <vector>

#include "qfi/family.hpp"
#include "qfi/measurement.hpp"
#include "qfi/states.hpp"

namespace qfi {

/// Measurement-controlled unitary U = sum_i P_i (x) O_i coupling system a to
/// auxiliary b: outcome i of the projective measurement on a steers unitary
/// O_i on b.
class ControlledUnitary {
 public:
  Eigen::Index dim_a() const { return meas_.dim(); }
  Eigen::Index dim_b() const { return dim_b_; }
  std::size_t count() const { return aux_ops_.size(); }

  const ProjectiveMeasurement& measurement() const { return meas_; }
  const std::vector<ComplexMatrix>& aux_unitaries() const { return aux_ops_; }

  /// The assembled matrix on the composite space.
  const ComplexMatrix& matrix() const { return matrix_; }

  /// False when every O_i is the same operator, in which case nothing about
  /// the measurement outcome reaches the auxiliary.
  bool propagating() const { return propagating_; }

  friend ControlledUnitary build_controlled_unitary(ProjectiveMeasurement meas,
                                                    std::vector<ComplexMatrix> aux_ops,
                                                    const Tolerances& tol);

 private:
  ControlledUnitary(ProjectiveMeasurement meas, std::vector<ComplexMatrix> aux_ops,
                    ComplexMatrix matrix, bool propagating);

  ProjectiveMeasurement meas_;
  std::vector<ComplexMatrix> aux_ops_;
  ComplexMatrix matrix_;
  Eigen::Index dim_b_ = 0;
  bool propagating_ = false;
};

/// Requires one auxiliary unitary per projector, each unitary within tol.proj,
/// composite dimension within the dense budget.
ControlledUnitary build_controlled_unitary(ProjectiveMeasurement meas,
                                           std::vector<ComplexMatrix> aux_ops,
                                           const Tolerances& tol = {});

/// Auxiliary state after the protocol, rho_b = sum_i Tr(P_i rho_a) O_i sigma O_i^dag.
/// Evaluated in this closed form; apply_protocol_dense is the literal
/// conjugate-and-trace path kept as an independent cross-check.
DensityOperator apply_protocol(const DensityOperator& rho_a, const AuxiliaryState& sigma_b,
                               const ControlledUnitary& cu, const Tolerances& tol = {});
DensityOperator apply_protocol_dense(const DensityOperator& rho_a,
                                     const AuxiliaryState& sigma_b,
                                     const ControlledUnitary& cu,
                                     const Tolerances& tol = {});

/// The transferred family x -> rho_b(x): mixture of the O_i sigma O_i^dag with
/// weights Tr(P_i rho_a(x)).
ParamStateFamily transferred_family(const ParamStateFamily& family_a,
                                    const AuxiliaryState& sigma_b,
                                    const ControlledUnitary& cu,
                                    const Tolerances& tol = {});

/// The composite family x -> U (rho_a(x) tensor sigma) U^dag.
ParamStateFamily composite_family(const ParamStateFamily& family_a,
                                  const AuxiliaryState& sigma_b,
                                  const ControlledUnitary& cu,
                                  const Tolerances& tol = {});

/// One point of the information-transfer audit. The chain under test is
/// F_a >= F_b >= F_sub_b, each step allowed tol.chain slack, plus the bound
/// F_b <= CFI_a and additivity F(U (rho_a tensor sigma) U^dag) = F_a.
struct ProtocolReport {
  double x = 0.0;
  RealVector probs, dprobs;  // measurement statistics on a
  double f_a = 0.0;          // QFI of rho_a(x)
  double f_b = 0.0;          // QFI of the transferred rho_b(x)
  double f_sub_b = 0.0;      // sub-QFI of rho_b(x)
  double cfi_a = 0.0;        // classical Fisher information of the measurement
  double f_composite = 0.0;  // QFI of the conjugated composite
  double additivity_gap = 0.0;
  bool chain_ok = false;
  bool ceiling_ok = false;
};

ProtocolReport audit_chain(const ParamStateFamily& family_a, const AuxiliaryState& sigma_b,
                           const ControlledUnitary& cu, double x,
                           const Tolerances& tol = {});

/// Classical ceiling for a mixed auxiliary: the fine-grained Fisher
/// information of the joint weights q_ij = p_i a_ij, which collapses back to
/// sum (dp_i)^2 / p_i whenever each weight row a_i sums to one. The identity
/// is asserted within tol.metric.
double mixed_aux_ceiling(const RealVector& probs, const RealVector& dprobs,
                         const RealMatrix& weights, const Tolerances& tol = {});

}  // namespace qfi
