#include "qfi/measurement.hpp"

#include <string>
#include <utility>

#include "qfi/errors.hpp"

namespace qfi {

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<ComplexMatrix> projectors,
                                             const Tolerances& tol)
    : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw ArgumentError("measurement: no projectors");
  dim_ = projectors_.front().rows();
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const ComplexMatrix& p = projectors_[i];
    const std::string tag = "projector " + std::to_string(i);
    if (p.rows() != dim_ || p.cols() != dim_)
      throw ArgumentError("measurement: " + tag + " has inconsistent dimensions");
    if (!p.allFinite()) throw ArgumentError("measurement: " + tag + " has non-finite entries");
    if (!is_hermitian(p, tol.proj)) throw ArgumentError("measurement: " + tag + " is not Hermitian");
    if (max_abs(p * p - p) > tol.proj)
      throw ArgumentError("measurement: " + tag + " is not idempotent");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if (max_abs(projectors_[i] * projectors_[j]) > tol.proj)
        throw ArgumentError("measurement: projectors " + std::to_string(i) + " and " +
                            std::to_string(j) + " are not orthogonal");
    }
    sum += projectors_[i];
  }
  if (max_abs(sum - ComplexMatrix::Identity(dim_, dim_)) > tol.proj)
    throw ArgumentError("measurement: projectors do not resolve the identity");
}

RealVector ProjectiveMeasurement::probabilities(const DensityOperator& rho) const {
  if (rho.dim() != dim_) throw ArgumentError("measurement: state dimension mismatch");
  return expectations(rho.matrix());
}

RealVector ProjectiveMeasurement::expectations(const ComplexMatrix& hermitian) const {
  if (hermitian.rows() != dim_ || hermitian.cols() != dim_)
    throw ArgumentError("measurement: operator dimension mismatch");
  RealVector out(static_cast<Eigen::Index>(projectors_.size()));
  for (std::size_t i = 0; i < projectors_.size(); ++i)
    out(static_cast<Eigen::Index>(i)) =
        (projectors_[i].cwiseProduct(hermitian.transpose())).sum().real();
  return out;
}

ProjectiveMeasurement ProjectiveMeasurement::computational(Eigen::Index dim,
                                                           const Tolerances& tol) {
  if (dim <= 0) throw ArgumentError("measurement: dim must be >= 1");
  std::vector<ComplexMatrix> projs;
  projs.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    p(k, k) = 1.0;
    projs.push_back(std::move(p));
  }
  return ProjectiveMeasurement(std::move(projs), tol);
}

ProbabilityCurve probability_curve(const ParamStateFamily& family,
                                   const ProjectiveMeasurement& meas,
                                   const std::vector<double>& grid) {
  const Eigen::Index rows = static_cast<Eigen::Index>(grid.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(meas.count());
  ProbabilityCurve out{RealMatrix(rows, cols), RealMatrix(rows, cols)};
  for (Eigen::Index g = 0; g < rows; ++g) {
    const double x = grid[static_cast<std::size_t>(g)];
    out.probs.row(g) = meas.probabilities(family.state_at(x)).transpose();
    out.dprobs.row(g) = meas.expectations(family.derivative_at(x)).transpose();
  }
  return out;
}

}  // namespace qfi
