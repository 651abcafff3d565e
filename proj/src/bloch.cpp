#include "qfi/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfi/errors.hpp"

namespace qfi {

namespace {

void check_p1(double p1) {
  if (!(p1 > 0.0) || !(p1 < 1.0))
    throw ArgumentError("bloch: p1 = " + std::to_string(p1) + " must lie strictly in (0, 1)");
}

void check_r(double r) {
  if (!(r >= 0.0) || !(r <= 1.0))
    throw ArgumentError("bloch: radius r = " + std::to_string(r) + " must lie in [0, 1]");
}

}  // namespace

double chi_of_angles(double theta1, double phi1, double theta2, double phi2) {
  const double c = std::sin(theta1) * std::sin(theta2) * std::cos(phi1 - phi2) +
                   std::cos(theta1) * std::cos(theta2);
  // c is a cosine; shave off rounding spill so chi stays in [-2, 0].
  return std::clamp(c, -1.0, 1.0) - 1.0;
}

BlochConfig BlochConfig::make(double r, double theta1, double phi1, double theta2,
                              double phi2) {
  check_r(r);
  BlochConfig cfg;
  cfg.r = r;
  cfg.theta1 = theta1;
  cfg.phi1 = phi1;
  cfg.theta2 = theta2;
  cfg.phi2 = phi2;
  cfg.chi = chi_of_angles(theta1, phi1, theta2, phi2);
  return cfg;
}

double single_qubit_qfi(double p1, double dp1, const BlochConfig& cfg, const Tolerances& tol) {
  check_p1(p1);
  check_r(cfg.r);
  if (!(cfg.chi >= -2.0) || !(cfg.chi <= 0.0))
    throw ArgumentError("bloch: chi = " + std::to_string(cfg.chi) + " must lie in [-2, 0]");

  // Parallel vectors: the two components coincide and the mixture does not
  // move with x at all.
  if (cfg.chi == 0.0) return 0.0;

  const double p2 = 1.0 - p1;
  const double r2 = cfg.r * cfg.r;
  const double denom = 1.0 - r2 - 2.0 * r2 * p1 * p2 * cfg.chi;
  if (denom <= tol.prob)
    throw SingularError("bloch: QFI denominator " + std::to_string(denom) + " vanishes");
  const double numer = -2.0 * r2 * (1.0 - r2) * cfg.chi + r2 * r2 * cfg.chi * cfg.chi;
  return numer * dp1 * dp1 / denom;
}

std::pair<double, double> chi_extrema(double p1, double r, const Tolerances& tol) {
  check_p1(p1);
  if (!(r > 0.0) || !(r <= 1.0))
    throw ArgumentError("bloch: chi_extrema needs r in (0, 1]");
  const double p2 = 1.0 - p1;
  if (p1 * p2 <= tol.prob)
    throw SingularError("bloch: p1 p2 vanishes, the stationary points diverge");
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * p1 * p2));
  const double denom = 2.0 * r * r * p1 * p2;
  const double lead = 1.0 - r * r;
  return {lead * (1.0 - root) / denom, lead * (1.0 + root) / denom};
}

SingleQubitOptimum optimize_single_qubit(double p1, double dp1, int n_chi, int n_r,
                                         double r_margin, const Tolerances& tol) {
  check_p1(p1);
  if (n_chi < 2 || n_r < 2) throw ArgumentError("bloch: optimizer grids need >= 2 points");
  if (!(r_margin > 0.0) || !(r_margin < 1.0))
    throw ArgumentError("bloch: r_margin must lie in (0, 1)");

  SingleQubitOptimum out;
  out.f_max = dp1 * dp1 / (p1 * (1.0 - p1));
  // The maximum sits on the excluded boundary: antipodal pure states.
  out.best = BlochConfig::make(1.0, 0.0, 0.0, std::numbers::pi, 0.0);

  for (int i = 0; i < n_chi; ++i) {
    const double chi = -2.0 + 2.0 * static_cast<double>(i) / (n_chi - 1);
    BlochConfig cfg;
    cfg.chi = std::min(chi, 0.0);
    for (int j = 0; j < n_r; ++j) {
      cfg.r = (1.0 - r_margin) * static_cast<double>(j) / (n_r - 1);
      const double f = single_qubit_qfi(p1, dp1, cfg, tol);
      if (f > out.grid_max) {
        out.grid_max = f;
        out.grid_chi_index = i;
        out.grid_r_index = j;
      }
    }
  }
  return out;
}

}  // namespace qfi
