#include "qfi/protocol.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"
#include "qfi/metrics.hpp"

namespace qfi {

ControlledUnitary::ControlledUnitary(ProjectiveMeasurement meas,
                                     std::vector<ComplexMatrix> aux_ops, ComplexMatrix matrix,
                                     bool propagating)
    : meas_(std::move(meas)),
      aux_ops_(std::move(aux_ops)),
      matrix_(std::move(matrix)),
      dim_b_(aux_ops_.front().rows()),
      propagating_(propagating) {}

ControlledUnitary build_controlled_unitary(ProjectiveMeasurement meas,
                                           std::vector<ComplexMatrix> aux_ops,
                                           const Tolerances& tol) {
  if (aux_ops.size() != meas.count())
    throw ArgumentError("controlled unitary: need exactly one auxiliary unitary per projector");

  const Eigen::Index db = aux_ops.front().rows();
  for (std::size_t i = 0; i < aux_ops.size(); ++i) {
    const ComplexMatrix& o = aux_ops[i];
    if (o.rows() != db || o.cols() != db)
      throw ArgumentError("controlled unitary: auxiliary operator " + std::to_string(i) +
                          " has inconsistent dimensions");
    if (max_abs(o.adjoint() * o - ComplexMatrix::Identity(db, db)) > tol.proj)
      throw ArgumentError("controlled unitary: auxiliary operator " + std::to_string(i) +
                          " is not unitary");
  }
  if (meas.dim() * db > kMaxDenseDim)
    throw ResourceError("controlled unitary: composite dimension exceeds the dense budget");

  bool propagating = false;
  for (std::size_t i = 1; i < aux_ops.size() && !propagating; ++i)
    propagating = max_abs(aux_ops[i] - aux_ops[0]) > tol.proj;

  ComplexMatrix u = ComplexMatrix::Zero(meas.dim() * db, meas.dim() * db);
  for (std::size_t i = 0; i < aux_ops.size(); ++i) u += kron(meas.projector(i), aux_ops[i]);

  return ControlledUnitary(std::move(meas), std::move(aux_ops), std::move(u), propagating);
}

DensityOperator apply_protocol(const DensityOperator& rho_a, const AuxiliaryState& sigma_b,
                               const ControlledUnitary& cu, const Tolerances& tol) {
  if (rho_a.dim() != cu.dim_a()) throw ArgumentError("apply_protocol: system dimension mismatch");
  if (sigma_b.dim() != cu.dim_b())
    throw ArgumentError("apply_protocol: auxiliary dimension mismatch");
  const RealVector p = cu.measurement().probabilities(rho_a);
  ComplexMatrix out = ComplexMatrix::Zero(cu.dim_b(), cu.dim_b());
  for (std::size_t i = 0; i < cu.count(); ++i) {
    const ComplexMatrix& o = cu.aux_unitaries()[i];
    out += p(static_cast<Eigen::Index>(i)) * (o * sigma_b.state().matrix() * o.adjoint());
  }
  return DensityOperator(out, tol);
}

DensityOperator apply_protocol_dense(const DensityOperator& rho_a,
                                     const AuxiliaryState& sigma_b, const ControlledUnitary& cu,
                                     const Tolerances& tol) {
  if (rho_a.dim() != cu.dim_a()) throw ArgumentError("apply_protocol: system dimension mismatch");
  if (sigma_b.dim() != cu.dim_b())
    throw ArgumentError("apply_protocol: auxiliary dimension mismatch");
  const ComplexMatrix joint = kron(rho_a.matrix(), sigma_b.state().matrix());
  const ComplexMatrix rotated = cu.matrix() * joint * cu.matrix().adjoint();
  return DensityOperator(partial_trace_matrix(rotated, cu.dim_a(), cu.dim_b(), Subsystem::B),
                         tol);
}

ParamStateFamily transferred_family(const ParamStateFamily& family_a,
                                    const AuxiliaryState& sigma_b, const ControlledUnitary& cu,
                                    const Tolerances& tol) {
  if (family_a.dim() != cu.dim_a())
    throw ArgumentError("transferred_family: system dimension mismatch");
  if (sigma_b.dim() != cu.dim_b())
    throw ArgumentError("transferred_family: auxiliary dimension mismatch");

  std::vector<DensityOperator> components;
  components.reserve(cu.count());
  for (const ComplexMatrix& o : cu.aux_unitaries())
    components.emplace_back(o * sigma_b.state().matrix() * o.adjoint(), tol);

  const ProjectiveMeasurement meas = cu.measurement();
  CoefficientCurve curve;
  curve.value = [family_a, meas](double x) { return meas.probabilities(family_a.state_at(x)); };
  curve.derivative = [family_a, meas](double x) {
    return meas.expectations(family_a.derivative_at(x));
  };
  return mixture_family(std::move(components), std::move(curve),
                        "transferred[" + family_a.label() + "]", tol);
}

ParamStateFamily composite_family(const ParamStateFamily& family_a,
                                  const AuxiliaryState& sigma_b, const ControlledUnitary& cu,
                                  const Tolerances& tol) {
  if (family_a.dim() != cu.dim_a())
    throw ArgumentError("composite_family: system dimension mismatch");
  if (sigma_b.dim() != cu.dim_b())
    throw ArgumentError("composite_family: auxiliary dimension mismatch");
  const ComplexMatrix u = cu.matrix();
  const ComplexMatrix sigma = sigma_b.state().matrix();
  return ParamStateFamily::from_callable(
      cu.dim_a() * cu.dim_b(), "composite[" + family_a.label() + "]",
      [family_a, sigma, u, tol](double x) {
        return DensityOperator(u * kron(family_a.state_at(x).matrix(), sigma) * u.adjoint(),
                               tol);
      },
      [family_a, sigma, u](double x) {
        return ComplexMatrix(u * kron(family_a.derivative_at(x), sigma) * u.adjoint());
      });
}

ProtocolReport audit_chain(const ParamStateFamily& family_a, const AuxiliaryState& sigma_b,
                           const ControlledUnitary& cu, double x, const Tolerances& tol) {
  ProtocolReport report;
  report.x = x;

  const DensityOperator rho_a = family_a.state_at(x);
  const ComplexMatrix drho_a = family_a.derivative_at(x);
  report.probs = cu.measurement().probabilities(rho_a);
  report.dprobs = cu.measurement().expectations(drho_a);

  report.f_a = qfi_spectral(rho_a, drho_a, tol);
  const ParamStateFamily fam_b = transferred_family(family_a, sigma_b, cu, tol);
  report.f_b = qfi_spectral(fam_b, x, tol);
  report.f_sub_b = sub_qfi_general(fam_b, x, tol);
  report.cfi_a = classical_fisher(report.probs, report.dprobs, tol);
  report.f_composite = qfi_spectral(composite_family(family_a, sigma_b, cu, tol), x, tol);

  report.additivity_gap = std::abs(report.f_composite - report.f_a);
  report.chain_ok = report.f_a >= report.f_b - tol.chain &&
                    report.f_b >= report.f_sub_b - tol.chain &&
                    report.additivity_gap <= tol.chain;
  report.ceiling_ok = report.f_b <= report.cfi_a + tol.chain;
  return report;
}

double mixed_aux_ceiling(const RealVector& probs, const RealVector& dprobs,
                         const RealMatrix& weights, const Tolerances& tol) {
  const Eigen::Index n = probs.size();
  if (n == 0 || dprobs.size() != n)
    throw ArgumentError("mixed_aux_ceiling: probs and dprobs must share a nonzero size");
  if (weights.rows() != n) throw ArgumentError("mixed_aux_ceiling: one weight row per outcome");

  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights.row(i).minCoeff() < -tol.prob)
      throw ArgumentError("mixed_aux_ceiling: negative auxiliary weight");
    if (std::abs(weights.row(i).sum() - 1.0) > tol.trace)
      throw ArgumentError("mixed_aux_ceiling: auxiliary weight row " + std::to_string(i) +
                          " does not sum to 1");
  }

  double fine_grained = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const double q = probs(i) * weights(i, j);
      const double dq = dprobs(i) * weights(i, j);
      if (q <= tol.prob) {
        if (std::abs(dq) > tol.prob) {
          std::ostringstream os;
          os << "mixed_aux_ceiling: joint weight (" << i << ", " << j
             << ") vanishes while its derivative is " << dq;
          throw SingularError(os.str());
        }
        continue;
      }
      fine_grained += dq * dq / q;
    }
  }

  const double coarse = classical_fisher(probs, dprobs, tol);
  if (std::abs(fine_grained - coarse) > tol.metric) {
    std::ostringstream os;
    os << "mixed_aux_ceiling: fine-grained value " << fine_grained
       << " disagrees with the coarse Fisher information " << coarse;
    throw StateError(os.str());
  }
  return fine_grained;
}

}  // namespace qfi
