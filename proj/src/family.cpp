#include "qfi/family.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"

namespace qfi {

namespace {

// Distinct nonzero gap magnitudes of a spectrum, merged within a relative
// window. Parameter shift applies only when there is exactly one.
std::vector<double> gap_magnitudes(const RealVector& lam) {
  std::vector<double> gaps;
  for (Eigen::Index j = 0; j < lam.size(); ++j)
    for (Eigen::Index k = j + 1; k < lam.size(); ++k)
      gaps.push_back(std::abs(lam(j) - lam(k)));
  std::sort(gaps.begin(), gaps.end());
  const double scale = gaps.empty() ? 0.0 : gaps.back();
  std::vector<double> distinct;
  for (double g : gaps) {
    if (g <= 1e-9 * std::max(scale, 1.0)) continue;  // zero gap
    if (distinct.empty() || g - distinct.back() > 1e-9 * std::max(scale, 1.0))
      distinct.push_back(g);
  }
  return distinct;
}

std::string format_gaps(const std::vector<double>& gaps) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < gaps.size(); ++i) os << (i ? ", " : "") << gaps[i];
  os << "}";
  return os.str();
}

}  // namespace

CoefficientCurve sinusoid_curve(RealVector weights, RealVector amplitudes, RealVector phases) {
  const Eigen::Index n = weights.size();
  if (n == 0 || amplitudes.size() != n || phases.size() != n)
    throw ArgumentError("sinusoid_curve: weights, amplitudes, phases must share a nonzero size");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(weights(i) > 0.0)) throw ArgumentError("sinusoid_curve: weights must be positive");
    if (!(std::abs(amplitudes(i)) < 1.0))
      throw ArgumentError("sinusoid_curve: amplitudes must satisfy |a| < 1");
  }

  auto raw = [weights, amplitudes, phases, n](double x) {
    RealVector u(n), du(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = weights(i) * (1.0 + amplitudes(i) * std::sin(x + phases(i)));
      du(i) = weights(i) * amplitudes(i) * std::cos(x + phases(i));
    }
    return std::pair{u, du};
  };

  CoefficientCurve curve;
  curve.value = [raw](double x) {
    auto [u, du] = raw(x);
    return RealVector(u / u.sum());
  };
  curve.derivative = [raw](double x) {
    auto [u, du] = raw(x);
    const double z = u.sum();
    const double dz = du.sum();
    return RealVector((du * z - u * dz) / (z * z));
  };
  return curve;
}

ComplexMatrix ParamStateFamily::derivative_at(double x) const {
  switch (strategy_.kind) {
    case DerivativeKind::Analytic:
      if (!analytic_) throw ConfigError("family '" + label_ + "' has no closed-form derivative");
      return hermitian_part(analytic_(x));
    case DerivativeKind::CentralDifference: {
      const double h = strategy_.step;
      return hermitian_part((eval_(x + h).matrix() - eval_(x - h).matrix()) / (2.0 * h));
    }
    case DerivativeKind::ParameterShift: {
      const double g = shift_scale_;
      const double s = strategy_.step;
      return hermitian_part(g * (eval_(x + s / g).matrix() - eval_(x - s / g).matrix()) /
                            (2.0 * std::sin(s)));
    }
  }
  throw StateError("unreachable derivative kind");
}

ParamStateFamily ParamStateFamily::with_strategy(DerivativeStrategy s) const {
  switch (s.kind) {
    case DerivativeKind::Analytic:
      if (!analytic_)
        throw ConfigError("family '" + label_ + "' has no closed-form derivative");
      break;
    case DerivativeKind::CentralDifference:
      if (!(s.step > 0.0) || !std::isfinite(s.step))
        throw ConfigError("central difference needs a positive finite step");
      break;
    case DerivativeKind::ParameterShift:
      if (!generator_)
        throw ConfigError("parameter shift: family '" + label_ +
                          "' has no generator to read gaps from");
      if (shift_scale_ <= 0.0) throw ConfigError(shift_issue_);
      if (!(s.step > 0.0) || !(s.step <= std::numbers::pi / 2))
        throw ConfigError("parameter shift needs a step in (0, pi/2]");
      break;
  }
  ParamStateFamily out = *this;
  out.strategy_ = s;
  return out;
}

const ComplexMatrix& ParamStateFamily::generator() const {
  if (!generator_) throw StateError("family '" + label_ + "' has no generator");
  return *generator_;
}

ParamStateFamily unitary_family(const DensityOperator& rho0, const HermitianGenerator& gen,
                                const Tolerances& tol) {
  if (gen.dim() != rho0.dim())
    throw ArgumentError("unitary_family: generator and state dimensions differ");

  struct Spectral {
    RealVector lam;
    ComplexMatrix vectors;
    ComplexMatrix rho0_eig;  // V^dag rho0 V
    ComplexMatrix h;
    Tolerances tol;
  };
  EigResult eig = hermitian_eig(gen.matrix, tol);
  auto sp = std::make_shared<Spectral>(Spectral{
      eig.values, eig.vectors, eig.vectors.adjoint() * rho0.matrix() * eig.vectors,
      gen.matrix, tol});

  ParamStateFamily fam;
  fam.dim_ = rho0.dim();
  fam.label_ = "unitary[" + gen.label + "]";
  fam.eval_ = [sp](double x) {
    const Eigen::Index d = sp->lam.size();
    ComplexMatrix rotated(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k)
        rotated(j, k) = std::polar(1.0, -x * (sp->lam(j) - sp->lam(k))) * sp->rho0_eig(j, k);
    return DensityOperator(sp->vectors * rotated * sp->vectors.adjoint(), sp->tol);
  };
  fam.analytic_ = [sp, eval = fam.eval_](double x) {
    const ComplexMatrix rho = eval(x).matrix();
    return ComplexMatrix(Complex(0, -1) * (sp->h * rho - rho * sp->h));
  };
  fam.generator_ = std::make_shared<const ComplexMatrix>(gen.matrix);

  const std::vector<double> gaps = gap_magnitudes(eig.values);
  if (gaps.size() == 1) {
    fam.shift_scale_ = gaps.front();
  } else if (gaps.empty()) {
    fam.shift_issue_ = "parameter shift: generator '" + gen.label +
                       "' has no nonzero eigenvalue gaps";
  } else {
    fam.shift_issue_ = "parameter shift needs a single nonzero gap magnitude; generator '" +
                       gen.label + "' has gaps " + format_gaps(gaps);
  }
  return fam;
}

ParamStateFamily mixture_family(std::vector<DensityOperator> states, CoefficientCurve curve,
                                std::string label, const Tolerances& tol) {
  if (states.empty()) throw ArgumentError("mixture_family: no component states");
  if (!curve.value || !curve.derivative)
    throw ArgumentError("mixture_family: coefficient curve is incomplete");
  const Eigen::Index d = states.front().dim();
  auto mats = std::make_shared<std::vector<ComplexMatrix>>();
  for (const auto& s : states) {
    if (s.dim() != d) throw ArgumentError("mixture_family: component dimensions differ");
    mats->push_back(s.matrix());
  }
  const Eigen::Index n = static_cast<Eigen::Index>(mats->size());

  ParamStateFamily fam;
  fam.dim_ = d;
  fam.label_ = std::move(label);
  fam.eval_ = [mats, value = curve.value, n, d, tol](double x) {
    const RealVector p = value(x);
    if (p.size() != n) throw ArgumentError("mixture_family: curve size mismatch");
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) m += p(i) * (*mats)[static_cast<std::size_t>(i)];
    return DensityOperator(m, tol);
  };
  fam.analytic_ = [mats, deriv = curve.derivative, n, d](double x) {
    const RealVector dp = deriv(x);
    if (dp.size() != n) throw ArgumentError("mixture_family: curve size mismatch");
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) m += dp(i) * (*mats)[static_cast<std::size_t>(i)];
    return m;
  };
  return fam;
}

ParamStateFamily diagonal_family(Eigen::Index dim, CoefficientCurve curve, std::string label,
                                 const Tolerances& tol) {
  if (dim <= 0) throw ArgumentError("diagonal_family: dim must be >= 1");
  if (!curve.value || !curve.derivative)
    throw ArgumentError("diagonal_family: coefficient curve is incomplete");

  ParamStateFamily fam;
  fam.dim_ = dim;
  fam.label_ = std::move(label);
  fam.eval_ = [value = curve.value, dim, tol](double x) {
    const RealVector p = value(x);
    if (p.size() != dim) throw ArgumentError("diagonal_family: curve size mismatch");
    return DensityOperator::from_populations(p, tol);
  };
  fam.analytic_ = [deriv = curve.derivative, dim](double x) {
    const RealVector dp = deriv(x);
    if (dp.size() != dim) throw ArgumentError("diagonal_family: curve size mismatch");
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m.diagonal() = dp.cast<Complex>();
    return m;
  };
  return fam;
}

ParamStateFamily ParamStateFamily::from_callable(Eigen::Index dim, std::string label,
                                                 Evaluator eval, DerivativeFn derivative) {
  if (dim <= 0) throw ArgumentError("from_callable: dim must be >= 1");
  if (!eval || !derivative) throw ArgumentError("from_callable: missing callables");
  ParamStateFamily fam;
  fam.dim_ = dim;
  fam.label_ = std::move(label);
  fam.eval_ = std::move(eval);
  fam.analytic_ = std::move(derivative);
  return fam;
}

ParamStateFamily constant_family(const DensityOperator& rho) {
  ParamStateFamily fam;
  fam.dim_ = rho.dim();
  fam.label_ = "constant";
  fam.eval_ = [rho](double) { return rho; };
  fam.analytic_ = [d = rho.dim()](double) { return ComplexMatrix::Zero(d, d); };
  return fam;
}

}  // namespace qfi
