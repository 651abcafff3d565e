#pragma once

#include <utility>

#include "qfi/tolerances.hpp"

namespace qfi {

/// Single-qubit ensemble geometry: two Bloch vectors of common length r at
/// angles (theta1, phi1), (theta2, phi2), mixed with weights (p1, 1 - p1).
/// chi = cos(angle between them) - 1, always in [-2, 0].
struct BlochConfig {
  double r = 1.0;
  double theta1 = 0.0, phi1 = 0.0;
  double theta2 = 0.0, phi2 = 0.0;
  double chi = 0.0;

  static BlochConfig make(double r, double theta1, double phi1, double theta2, double phi2);
};

/// chi from the two directions alone.
double chi_of_angles(double theta1, double phi1, double theta2, double phi2);

/// QFI of rho(x) = p1(x) rho_1 + p2(x) rho_2 for the two-Bloch-vector ensemble,
/// as a closed form in (r, chi, p1, dp1). Exactly zero at chi = 0 (parallel
/// vectors make the family weight-independent).
double single_qubit_qfi(double p1, double dp1, const BlochConfig& cfg,
                        const Tolerances& tol = {});

/// Stationary chi values (chi-, chi+) of the QFI at fixed r < 1.
std::pair<double, double> chi_extrema(double p1, double r, const Tolerances& tol = {});

struct SingleQubitOptimum {
  BlochConfig best;        // antipodal pure pair: chi = -2, r = 1
  double f_max = 0.0;      // (dp1)^2 / (p1 p2)
  double grid_max = 0.0;   // best value seen on the interior scan
  int grid_chi_index = 0;  // argmax of the scan, first hit wins
  int grid_r_index = 0;
};

/// Maximizes the closed form: scans a (chi, r) grid over [-2, 0] x [0, 1 - r_margin]
/// and injects the analytic boundary optimum, which dominates the interior.
SingleQubitOptimum optimize_single_qubit(double p1, double dp1, int n_chi = 81,
                                         int n_r = 81, double r_margin = 1e-3,
                                         const Tolerances& tol = {});

}  // namespace qfi
