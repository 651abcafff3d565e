#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qfi/family.hpp"
#include "qfi/measurement.hpp"
#include "qfi/tolerances.hpp"

namespace qfi {

/// How far a set of outcomes is from having proportional statistics:
/// max over pairs of |p_j dp_k - p_k dp_j|. Zero means merging the set loses
/// no Fisher information.
double grouping_condition(std::span<const double> probs, std::span<const double> dprobs);

/// Exact Fisher information lost by coarse-graining a distribution into the
/// given partition: sum over groups of the pairwise terms
/// (p_l dp_j - p_j dp_l)^2 / (p_j p_l sum_group p). Always >= 0, and zero iff
/// every group satisfies the proportionality condition.
double cfi_group_difference(const RealVector& probs, const RealVector& dprobs,
                            const std::vector<std::vector<std::size_t>>& partition,
                            const Tolerances& tol = {});

struct GroupingPlan {
  std::vector<std::vector<std::size_t>> groups;  // indices into the original outcome list
  std::vector<double> residuals;                 // grouping_condition per final group
  double cfi_before = 0.0;
  double cfi_after = 0.0;
};

/// Greedy agglomerative merge of measurement outcomes whose statistics at x
/// are proportional within residual_tol. Merge order is deterministic: among
/// qualifying pairs, largest combined size first, then lowest indices. When
/// residual_tol is not given it defaults to 1e-9 scaled by the largest
/// |p_j dp_k| so the threshold tracks the data's magnitude.
GroupingPlan reduce_projectors(const ProjectiveMeasurement& meas,
                               const ParamStateFamily& family, double x,
                               std::optional<double> residual_tol = std::nullopt,
                               const Tolerances& tol = {});

/// Materialize the plan: one summed projector per group.
ProjectiveMeasurement merged_measurement(const ProjectiveMeasurement& meas,
                                         const GroupingPlan& plan,
                                         const Tolerances& tol = {});

}  // namespace qfi
