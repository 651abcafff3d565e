#include "qfi/random_states.hpp"

#include <Eigen/QR>
#include <string>

#include "qfi/errors.hpp"

namespace qfi {

namespace {

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, std::mt19937_64& rng,
                               const Tolerances& tol) {
  if (dim <= 0) throw ArgumentError("random_density: dim must be >= 1");
  if (rank < 1 || rank > dim)
    throw ArgumentError("random_density: rank " + std::to_string(rank) +
                        " out of range [1, " + std::to_string(dim) + "]");
  if (dim > kMaxDenseDim) throw ResourceError("random_density: dim exceeds the dense budget");
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(m, tol);
}

DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed,
                               const Tolerances& tol) {
  std::mt19937_64 rng(seed);
  return random_density(dim, rank, rng, tol);
}

PureState random_pure(Eigen::Index dim, std::mt19937_64& rng, const Tolerances& tol) {
  if (dim <= 0) throw ArgumentError("random_pure: dim must be >= 1");
  ComplexVector v = ginibre(dim, 1, rng).col(0);
  v.normalize();
  return PureState(std::move(v), tol);
}

ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  if (dim <= 0) throw ArgumentError("random_unitary: dim must be >= 1");
  const ComplexMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar, not QR-dependent.
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  if (dim <= 0) throw ArgumentError("random_hermitian: dim must be >= 1");
  const ComplexMatrix g = ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace qfi
