#include "qfi/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfi/errors.hpp"
#include "qfi/metrics.hpp"

namespace qfi {

double grouping_condition(std::span<const double> probs, std::span<const double> dprobs) {
  if (probs.size() != dprobs.size())
    throw ArgumentError("grouping_condition: probs and dprobs sizes differ");
  double worst = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j)
    for (std::size_t k = j + 1; k < probs.size(); ++k)
      worst = std::max(worst, std::abs(probs[j] * dprobs[k] - probs[k] * dprobs[j]));
  return worst;
}

double cfi_group_difference(const RealVector& probs, const RealVector& dprobs,
                            const std::vector<std::vector<std::size_t>>& partition,
                            const Tolerances& tol) {
  const Eigen::Index n = probs.size();
  if (n == 0 || dprobs.size() != n)
    throw ArgumentError("cfi_group_difference: probs and dprobs must share a nonzero size");

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::size_t covered = 0;
  for (const auto& group : partition) {
    for (std::size_t idx : group) {
      if (idx >= static_cast<std::size_t>(n) || seen[idx])
        throw ArgumentError("cfi_group_difference: partition is not a partition of the outcomes");
      seen[idx] = true;
      ++covered;
    }
  }
  if (covered != static_cast<std::size_t>(n))
    throw ArgumentError("cfi_group_difference: partition does not cover every outcome");

  double diff = 0.0;
  for (const auto& group : partition) {
    double group_sum = 0.0;
    for (std::size_t idx : group) group_sum += probs(static_cast<Eigen::Index>(idx));
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const double pj = probs(static_cast<Eigen::Index>(group[a]));
        const double pl = probs(static_cast<Eigen::Index>(group[b]));
        const double dj = dprobs(static_cast<Eigen::Index>(group[a]));
        const double dl = dprobs(static_cast<Eigen::Index>(group[b]));
        if (pj <= tol.prob || pl <= tol.prob) {
          const std::size_t zero_idx = pj <= tol.prob ? group[a] : group[b];
          const double zero_d = pj <= tol.prob ? dj : dl;
          if (std::abs(zero_d) > tol.prob) {
            std::ostringstream os;
            os << "cfi_group_difference: outcome " << zero_idx
               << " has zero probability but derivative " << zero_d;
            throw SingularError(os.str());
          }
          continue;  // dead outcome, contributes nothing
        }
        const double num = pl * dj - pj * dl;
        diff += num * num / (pj * pl * group_sum);
      }
    }
  }
  return diff;
}

namespace {

double group_residual(const RealVector& probs, const RealVector& dprobs,
                      const std::vector<std::size_t>& group) {
  std::vector<double> p, dp;
  p.reserve(group.size());
  dp.reserve(group.size());
  for (std::size_t idx : group) {
    p.push_back(probs(static_cast<Eigen::Index>(idx)));
    dp.push_back(dprobs(static_cast<Eigen::Index>(idx)));
  }
  return grouping_condition(p, dp);
}

}  // namespace

GroupingPlan reduce_projectors(const ProjectiveMeasurement& meas, const ParamStateFamily& family,
                               double x, std::optional<double> residual_tol,
                               const Tolerances& tol) {
  if (meas.dim() != family.dim())
    throw ArgumentError("reduce_projectors: measurement and family dimensions differ");

  const RealVector probs = meas.probabilities(family.state_at(x));
  const RealVector dprobs = meas.expectations(family.derivative_at(x));

  double rtol;
  if (residual_tol) {
    rtol = *residual_tol;
    if (!(rtol >= 0.0)) throw ArgumentError("reduce_projectors: residual tolerance must be >= 0");
  } else {
    const double scale =
        probs.cwiseAbs().maxCoeff() > 0.0
            ? probs.cwiseAbs().maxCoeff() * dprobs.cwiseAbs().maxCoeff()
            : 0.0;
    rtol = 1e-9 * scale;
  }

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < meas.count(); ++i) groups.push_back({i});

  // Greedy agglomeration: among pairs whose merged residual stays within
  // rtol, take the largest combined size, breaking ties toward the lowest
  // indices, until no pair qualifies.
  while (true) {
    int best_a = -1, best_b = -1;
    std::size_t best_size = 0;
    for (std::size_t a = 0; a < groups.size(); ++a) {
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        std::vector<std::size_t> merged = groups[a];
        merged.insert(merged.end(), groups[b].begin(), groups[b].end());
        if (group_residual(probs, dprobs, merged) > rtol) continue;
        if (merged.size() > best_size) {
          best_size = merged.size();
          best_a = static_cast<int>(a);
          best_b = static_cast<int>(b);
        }
      }
    }
    if (best_a < 0) break;
    auto& dst = groups[static_cast<std::size_t>(best_a)];
    auto& src = groups[static_cast<std::size_t>(best_b)];
    dst.insert(dst.end(), src.begin(), src.end());
    std::sort(dst.begin(), dst.end());
    groups.erase(groups.begin() + best_b);
  }

  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  GroupingPlan plan;
  plan.groups = std::move(groups);
  for (const auto& group : plan.groups)
    plan.residuals.push_back(group_residual(probs, dprobs, group));

  plan.cfi_before = classical_fisher(probs, dprobs, tol);
  RealVector gp(static_cast<Eigen::Index>(plan.groups.size()));
  RealVector gdp(static_cast<Eigen::Index>(plan.groups.size()));
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    double sp = 0.0, sdp = 0.0;
    for (std::size_t idx : plan.groups[g]) {
      sp += probs(static_cast<Eigen::Index>(idx));
      sdp += dprobs(static_cast<Eigen::Index>(idx));
    }
    gp(static_cast<Eigen::Index>(g)) = sp;
    gdp(static_cast<Eigen::Index>(g)) = sdp;
  }
  plan.cfi_after = classical_fisher(gp, gdp, tol);
  return plan;
}

ProjectiveMeasurement merged_measurement(const ProjectiveMeasurement& meas,
                                         const GroupingPlan& plan, const Tolerances& tol) {
  std::vector<ComplexMatrix> projs;
  projs.reserve(plan.groups.size());
  for (const auto& group : plan.groups) {
    ComplexMatrix p = ComplexMatrix::Zero(meas.dim(), meas.dim());
    for (std::size_t idx : group) p += meas.projector(idx);
    projs.push_back(std::move(p));
  }
  return ProjectiveMeasurement(std::move(projs), tol);
}

}  // namespace qfi
