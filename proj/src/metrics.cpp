#include "qfi/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"
#include "qfi/sld.hpp"

namespace qfi {

double purity(const DensityOperator& rho) { return rho.matrix().squaredNorm(); }

double uhlmann_fidelity(const DensityOperator& rho1, const DensityOperator& rho2,
                        const Tolerances& tol) {
  if (rho1.dim() != rho2.dim()) throw ArgumentError("uhlmann_fidelity: dimension mismatch");
  const ComplexMatrix root = matrix_sqrt_psd(rho1.matrix(), tol);
  const ComplexMatrix inner = hermitian_part(root * rho2.matrix() * root);
  const EigResult eig = hermitian_eig(inner, tol);
  // Eigenvalues that are pure rounding dust would contribute O(sqrt(eps))
  // after the square root; flush them to zero first.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  double f = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values(i);
    if (lam > floor) f += std::sqrt(lam);
  }
  return f;
}

double superfidelity(const DensityOperator& rho1, const DensityOperator& rho2,
                     const Tolerances& tol) {
  if (rho1.dim() != rho2.dim()) throw ArgumentError("superfidelity: dimension mismatch");
  (void)tol;
  const double cross = (rho1.matrix() * rho2.matrix()).trace().real();
  // Mixedness at rounding-dust level belongs to an exactly pure state; the
  // square root would otherwise blow O(eps) dust up to O(1e-8).
  const double floor = 64.0 * std::numeric_limits<double>::epsilon();
  auto mixedness = [floor](const DensityOperator& rho) {
    const double m = 1.0 - purity(rho);
    return m > floor ? m : 0.0;
  };
  return cross + std::sqrt(mixedness(rho1) * mixedness(rho2));
}

double eig_pair_product_sum(const ComplexMatrix& m, const Tolerances& tol) {
  const EigResult eig = hermitian_eig(m, tol);
  // Same noise floor as the fidelity path: eigenvalue dust on a rank-deficient
  // input would survive into the pair products and poison downstream square
  // roots.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  double sum = 0.0, sum_sq = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values(i);
    if (lam < -tol.psd)
      throw ArgumentError("eig_pair_product_sum: matrix is not positive semidefinite");
    const double clamped = lam > floor ? lam : 0.0;
    sum += clamped;
    sum_sq += clamped * clamped;
  }
  return sum * sum - sum_sq;
}

double classical_fisher(const RealVector& probs, const RealVector& dprobs,
                        const Tolerances& tol) {
  if (probs.size() == 0 || probs.size() != dprobs.size())
    throw ArgumentError("classical_fisher: probs and dprobs must share a nonzero size");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = probs(i);
    if (p < -tol.prob) throw ArgumentError("classical_fisher: negative probability");
    if (p <= tol.prob) {
      if (std::abs(dprobs(i)) > tol.prob) {
        std::ostringstream os;
        os << "classical_fisher: outcome " << i << " has zero probability but derivative "
           << dprobs(i);
        throw SingularError(os.str());
      }
      continue;
    }
    sum += dprobs(i) * dprobs(i) / p;
  }
  return sum;
}

double qfi_spectral(const DensityOperator& rho, const ComplexMatrix& drho,
                    const Tolerances& tol) {
  return sld_spectral(rho, drho, tol).qfi;
}

double qfi_spectral(const ParamStateFamily& family, double x, const Tolerances& tol) {
  return qfi_spectral(family.state_at(x), family.derivative_at(x), tol);
}

double sub_qfi_general(const DensityOperator& rho, const ComplexMatrix& drho,
                       const Tolerances& tol) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim())
    throw ArgumentError("sub_qfi_general: derivative dimension mismatch");
  if (!is_hermitian(drho, tol.herm))
    throw ArgumentError("sub_qfi_general: derivative is not Hermitian");
  const double leading = 2.0 * drho.squaredNorm();  // 2 Tr[(drho)^2]
  const double p = purity(rho);
  if (p >= 1.0 - tol.pure) return leading;
  const double dp = 2.0 * (rho.matrix() * drho).trace().real();  // d/dx Tr(rho^2)
  return leading + 0.5 * dp * dp / (1.0 - p);
}

double sub_qfi_general(const ParamStateFamily& family, double x, const Tolerances& tol) {
  return sub_qfi_general(family.state_at(x), family.derivative_at(x), tol);
}

double sub_qfi_unitary(const DensityOperator& rho0, const HermitianGenerator& gen,
                       const Tolerances& tol) {
  if (gen.dim() != rho0.dim()) throw ArgumentError("sub_qfi_unitary: dimension mismatch");
  (void)tol;
  const ComplexMatrix& rho = rho0.matrix();
  const ComplexMatrix& h = gen.matrix;
  const ComplexMatrix rh = rho * h;
  const double t1 = (rho * rh * h).trace().real();  // Tr(rho^2 H^2) via cyclicity
  const double t2 = (rh * rh).trace().real();       // Tr(rho H rho H)
  return 4.0 * (t1 - t2);
}

namespace {

// Neville tableau in t = dx^2, extrapolated to t = 0.
double richardson(const std::vector<double>& estimates, const std::vector<double>& dxs) {
  std::vector<double> t(dxs.size()), r = estimates;
  for (std::size_t i = 0; i < dxs.size(); ++i) t[i] = dxs[i] * dxs[i];
  const std::size_t n = r.size();
  for (std::size_t lvl = 1; lvl < n; ++lvl)
    for (std::size_t i = 0; i + lvl < n; ++i)
      r[i] = r[i + 1] + (r[i + 1] - r[i]) * t[i + lvl] / (t[i] - t[i + lvl]);
  return r[0];
}

}  // namespace

SubQfiLimit sub_qfi_limit(const ParamStateFamily& family, double x,
                          const std::vector<double>& dx_seq, const Tolerances& tol) {
  if (dx_seq.empty()) throw ArgumentError("sub_qfi_limit: empty step sequence");
  for (std::size_t i = 0; i < dx_seq.size(); ++i) {
    if (!(dx_seq[i] > 0.0) || !std::isfinite(dx_seq[i]))
      throw ArgumentError("sub_qfi_limit: steps must be positive and finite");
    if (i > 0 && dx_seq[i] >= dx_seq[i - 1])
      throw ArgumentError("sub_qfi_limit: steps must be strictly descending");
  }

  const DensityOperator here = family.state_at(x);
  SubQfiLimit out;
  out.estimates.reserve(dx_seq.size());
  for (double dx : dx_seq) {
    const double g = superfidelity(here, family.state_at(x + dx), tol);
    const double delta = std::max(0.0, 1.0 - std::sqrt(g));
    // Below ~64 eps the subtraction 1 - sqrt(g) carries no signal; with a
    // coarse step that genuinely means a flat family, with a tiny one it
    // means the step is too small to resolve anything.
    if (delta < 64.0 * std::numeric_limits<double>::epsilon() && dx <= 1e-4) {
      std::ostringstream os;
      os << "sub_qfi_limit: dx=" << dx << " is too small to resolve the superfidelity drop";
      throw PrecisionError(os.str());
    }
    out.estimates.push_back(8.0 * delta / (dx * dx));
  }
  out.extrapolated = richardson(out.estimates, dx_seq);
  return out;
}

MetricReport evaluate_metrics(const ParamStateFamily& family, double x, const Tolerances& tol) {
  const DensityOperator rho = family.state_at(x);
  const ComplexMatrix drho = family.derivative_at(x);

  MetricReport report;
  report.purity = purity(rho);
  report.qfi = qfi_spectral(rho, drho, tol);
  report.sub_qfi = sub_qfi_general(rho, drho, tol);
  report.method_tags.push_back("qfi:sld-spectral");
  report.method_tags.push_back(report.purity >= 1.0 - tol.pure ? "sub-qfi:pure-form"
                                                               : "sub-qfi:general-form");
  switch (family.strategy().kind) {
    case DerivativeKind::Analytic: report.method_tags.push_back("derivative:analytic"); break;
    case DerivativeKind::CentralDifference:
      report.method_tags.push_back("derivative:central-difference");
      break;
    case DerivativeKind::ParameterShift:
      report.method_tags.push_back("derivative:parameter-shift");
      break;
  }
  if (report.sub_qfi > report.qfi + tol.metric)
    report.method_tags.push_back("warning:sub-qfi-exceeds-qfi");
  return report;
}

}  // namespace qfi
