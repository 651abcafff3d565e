#include "qfi/generators.hpp"

#include <utility>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"

namespace qfi {

HermitianGenerator make_generator(ComplexMatrix m, std::string label, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw ArgumentError("generator must be square and non-empty");
  if (!m.allFinite()) throw ArgumentError("generator has non-finite entries");
  if (!is_hermitian(m, tol.herm)) throw ArgumentError("generator is not Hermitian");
  return {hermitian_part(m), std::move(label)};
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

HermitianGenerator collective_spin(int n_qubits, Axis axis, const Tolerances& tol) {
  if (n_qubits < 1) throw ArgumentError("collective_spin: need at least one qubit");
  if ((Eigen::Index{1} << n_qubits) > kMaxDenseDim)
    throw ResourceError("collective_spin: qubit count exceeds the dense budget");

  ComplexMatrix sigma;
  char axis_name = '?';
  switch (axis) {
    case Axis::X: sigma = pauli_x(); axis_name = 'x'; break;
    case Axis::Y: sigma = pauli_y(); axis_name = 'y'; break;
    case Axis::Z: sigma = pauli_z(); axis_name = 'z'; break;
  }

  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix j = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < n_qubits; ++k) {
    ComplexMatrix term = ComplexMatrix::Identity(1, 1);
    for (int site = 0; site < n_qubits; ++site) {
      term = kron(term, site == k ? sigma : ComplexMatrix::Identity(2, 2));
    }
    j += 0.5 * term;
  }
  return make_generator(std::move(j), std::string("J_") + axis_name, tol);
}

}  // namespace qfi
