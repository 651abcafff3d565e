#pragma once

#include <string>
#include <vector>

#include "qfi/family.hpp"
#include "qfi/states.hpp"

namespace qfi {

/// Tr(rho^2).
double purity(const DensityOperator& rho);

/// Uhlmann fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), computed from the
/// eigenvalues of the inner product matrix with a noise-floor clamp so that
/// states of reduced rank do not pick up O(sqrt(eps)) dirt.
double uhlmann_fidelity(const DensityOperator& rho1, const DensityOperator& rho2,
                        const Tolerances& tol = {});

/// Superfidelity Tr(rho1 rho2) + sqrt((1 - Tr rho1^2)(1 - Tr rho2^2)).
/// Upper-bounds the Uhlmann fidelity; coincides with its square root's square
/// on a pair of qubits, i.e. g = f^2 for dim 2.
double superfidelity(const DensityOperator& rho1, const DensityOperator& rho2,
                     const Tolerances& tol = {});

/// Sum over ordered eigenvalue pairs j != k of lambda_j lambda_k, which is
/// (sum lambda)^2 - sum lambda^2. Input must be Hermitian PSD.
double eig_pair_product_sum(const ComplexMatrix& m, const Tolerances& tol = {});

/// Classical Fisher information sum_i (dp_i)^2 / p_i. Outcomes with p_i at or
/// below tol.prob are skipped when their derivative also vanishes and raise
/// SingularError otherwise.
double classical_fisher(const RealVector& probs, const RealVector& dprobs,
                        const Tolerances& tol = {});

/// Quantum Fisher information via the SLD spectral sum,
/// F = sum 2 |<j|drho|k>|^2 / (lambda_j + lambda_k) over retained pairs.
double qfi_spectral(const DensityOperator& rho, const ComplexMatrix& drho,
                    const Tolerances& tol = {});
double qfi_spectral(const ParamStateFamily& family, double x, const Tolerances& tol = {});

/// Sub-quantum Fisher information from state and derivative:
/// 2 Tr[(drho)^2] plus the mixedness correction
/// (d Tr rho^2 / dx)^2 / (2 (1 - Tr rho^2)); the correction is dropped on the
/// pure branch purity >= 1 - tol.pure.
double sub_qfi_general(const DensityOperator& rho, const ComplexMatrix& drho,
                       const Tolerances& tol = {});
double sub_qfi_general(const ParamStateFamily& family, double x, const Tolerances& tol = {});

/// Closed form for unitary encodings, 4 (Tr(rho^2 H^2) - Tr(rho H rho H)).
/// Independent of x.
double sub_qfi_unitary(const DensityOperator& rho0, const HermitianGenerator& gen,
                       const Tolerances& tol = {});

struct SubQfiLimit {
  std::vector<double> estimates;  // 8 (1 - sqrt g(x, x+dx)) / dx^2 per step
  double extrapolated = 0.0;      // Richardson limit of the estimates in dx^2
};

/// Sub-QFI through its defining limit on the superfidelity, extrapolated to
/// dx -> 0 from the supplied step sequence (descending, all > 0).
SubQfiLimit sub_qfi_limit(const ParamStateFamily& family, double x,
                          const std::vector<double>& dx_seq, const Tolerances& tol = {});

struct MetricReport {
  double qfi = 0.0;
  double sub_qfi = 0.0;
  double purity = 0.0;
  std::vector<std::string> method_tags;
};

/// Bundle of the point metrics with tags recording which branch computed each.
MetricReport evaluate_metrics(const ParamStateFamily& family, double x,
                              const Tolerances& tol = {});

}  // namespace qfi
