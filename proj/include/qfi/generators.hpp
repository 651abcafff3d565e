#pragma once

#include <string>

#include "qfi/complex_matrix.hpp"
#include "qfi/tolerances.hpp"

namespace qfi {

/// Hermitian generator of a unitary parameter encoding rho(x) = e^{-ixH} rho0 e^{ixH}.
struct HermitianGenerator {
  ComplexMatrix matrix;
  std::string label;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Validates Hermiticity before wrapping.
HermitianGenerator make_generator(ComplexMatrix m, std::string label,
                                  const Tolerances& tol = {});

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

enum class Axis { X, Y, Z };

/// Collective spin J = sum_k sigma_axis^(k) / 2 on n qubits.
HermitianGenerator collective_spin(int n_qubits, Axis axis, const Tolerances& tol = {});

}  // namespace qfi
