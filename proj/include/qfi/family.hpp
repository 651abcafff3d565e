#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "qfi/generators.hpp"
#include "qfi/states.hpp"

namespace qfi {

enum class DerivativeKind { Analytic, CentralDifference, ParameterShift };

struct DerivativeStrategy {
  DerivativeKind kind = DerivativeKind::Analytic;
  double step = 0.0;  // h for central difference, shift s for parameter shift

  static DerivativeStrategy analytic() { return {DerivativeKind::Analytic, 0.0}; }
  static DerivativeStrategy central_difference(double h = 1e-5) {
    return {DerivativeKind::CentralDifference, h};
  }
  static DerivativeStrategy parameter_shift(double s = std::numbers::pi / 4) {
    return {DerivativeKind::ParameterShift, s};
  }
};

/// Mixing weights p_i(x) with their derivative, for mixture and diagonal
/// families.
struct CoefficientCurve {
  std::function<RealVector(double)> value;
  std::function<RealVector(double)> derivative;
};

/// Normalized sinusoidal distribution p_i(x) ~ w_i (1 + a_i sin(x + phi_i)),
/// with the exact derivative of the normalized form. Needs w_i > 0, |a_i| < 1.
CoefficientCurve sinusoid_curve(RealVector weights, RealVector amplitudes,
                                RealVector phases);

/// One-parameter family of density matrices x -> rho(x) with a pluggable
/// derivative strategy. Built through the factories below.
class ParamStateFamily {
 public:
  using Evaluator = std::function<DensityOperator(double)>;
  using DerivativeFn = std::function<ComplexMatrix(double)>;

  Eigen::Index dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const DerivativeStrategy& strategy() const { return strategy_; }

  DensityOperator state_at(double x) const { return eval_(x); }

  /// d rho / dx at x, per the active strategy. Always returned exactly
  /// Hermitian.
  ComplexMatrix derivative_at(double x) const;

  /// Copy with a different derivative strategy. Throws ConfigError when the
  /// family cannot honour it (no closed form for Analytic; parameter shift on
  /// a family without a single-gap generator).
  ParamStateFamily with_strategy(DerivativeStrategy s) const;

  bool has_generator() const { return generator_ != nullptr; }
  const ComplexMatrix& generator() const;

  /// Escape hatch for callers that compute state and derivative themselves
  /// (e.g. conjugated composites). The evaluator owns validity; the derivative
  /// is treated as analytic.
  static ParamStateFamily from_callable(Eigen::Index dim, std::string label, Evaluator eval,
                                        DerivativeFn derivative);

  friend ParamStateFamily unitary_family(const DensityOperator& rho0,
                                         const HermitianGenerator& gen,
                                         const Tolerances& tol);
  friend ParamStateFamily mixture_family(std::vector<DensityOperator> states,
                                         CoefficientCurve curve, std::string label,
                                         const Tolerances& tol);
  friend ParamStateFamily diagonal_family(Eigen::Index dim, CoefficientCurve curve,
                                          std::string label, const Tolerances& tol);
  friend ParamStateFamily constant_family(const DensityOperator& rho);

 private:
  ParamStateFamily() = default;

  Eigen::Index dim_ = 0;
  std::string label_;
  Evaluator eval_;
  DerivativeFn analytic_;  // empty when no closed form is known
  std::shared_ptr<const ComplexMatrix> generator_;
  double shift_scale_ = 0.0;   // generator gap magnitude when parameter shift applies
  std::string shift_issue_;    // why parameter shift is unavailable, when it is
  DerivativeStrategy strategy_ = DerivativeStrategy::analytic();
};

/// rho(x) = e^{-ixH} rho0 e^{ixH}, evaluated by spectral exponentiation of H.
/// Analytic derivative -i [H, rho(x)].
ParamStateFamily unitary_family(const DensityOperator& rho0, const HermitianGenerator& gen,
                                const Tolerances& tol = {});

/// rho(x) = sum_i p_i(x) rho_i. Analytic derivative sum_i p_i'(x) rho_i.
ParamStateFamily mixture_family(std::vector<DensityOperator> states, CoefficientCurve curve,
                                std::string label = "mixture", const Tolerances& tol = {});

/// rho(x) = diag(p(x)).
ParamStateFamily diagonal_family(Eigen::Index dim, CoefficientCurve curve,
                                 std::string label = "diagonal", const Tolerances& tol = {});

/// x-independent family; derivative identically zero.
ParamStateFamily constant_family(const DensityOperator& rho);

}  // namespace qfi
