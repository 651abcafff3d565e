#pragma once

#include <vector>

#include "qfi/family.hpp"
#include "qfi/states.hpp"

namespace qfi {

/// Complete set of mutually orthogonal projectors. Construction verifies
/// Hermiticity, idempotence, pairwise orthogonality and completeness within
/// tol.proj.
class ProjectiveMeasurement {
 public:
  explicit ProjectiveMeasurement(std::vector<ComplexMatrix> projectors,
                                 const Tolerances& tol = {});

  Eigen::Index dim() const { return dim_; }
  std::size_t count() const { return projectors_.size(); }
  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
  const ComplexMatrix& projector(std::size_t i) const { return projectors_.at(i); }

  /// Outcome probabilities Tr(P_i rho).
  RealVector probabilities(const DensityOperator& rho) const;

  /// Tr(P_i M) for a Hermitian M; with M = d rho/dx these are the probability
  /// derivatives.
  RealVector expectations(const ComplexMatrix& hermitian) const;

  static ProjectiveMeasurement computational(Eigen::Index dim, const Tolerances& tol = {});

 private:
  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> projectors_;
};

/// Probabilities and their derivatives for a family swept over a grid.
/// Row g holds outcome data at grid point g.
struct ProbabilityCurve {
  RealMatrix probs;
  RealMatrix dprobs;
};

ProbabilityCurve probability_curve(const ParamStateFamily& family,
                                   const ProjectiveMeasurement& meas,
                                   const std::vector<double>& grid);

}  // namespace qfi
