#pragma once

#include <random>
#include <vector>

#include "qfi/family.hpp"
#include "qfi/generators.hpp"
#include "qfi/random_states.hpp"
#include "qfi/states.hpp"

namespace qfi::test {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Eigen::Index uniform_index(std::mt19937_64& g, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(g);
}

/// Random unitary-encoded family of the given dimension and rank.
inline ParamStateFamily random_unitary_family(Eigen::Index dim, Eigen::Index rank,
                                              std::mt19937_64& g) {
  DensityOperator rho0 = random_density(dim, rank, g);
  HermitianGenerator gen = make_generator(random_hermitian(dim, g), "rand");
  return unitary_family(rho0, gen);
}

/// Normalized random weights bounded away from zero.
inline RealVector random_weights(Eigen::Index n, std::mt19937_64& g, double floor = 0.2) {
  RealVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = uniform(g, floor, 1.0);
  return w / w.sum();
}

/// Zero-sum random derivative vector.
inline RealVector random_dweights(Eigen::Index n, std::mt19937_64& g) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealVector dw(n);
  for (Eigen::Index i = 0; i < n; ++i) dw(i) = gauss(g);
  dw.array() -= dw.mean();
  return dw;
}

/// Random pure-state ensemble with a well-conditioned Gram matrix.
inline std::vector<PureState> random_ensemble(Eigen::Index dim, Eigen::Index n,
                                              std::mt19937_64& g) {
  while (true) {
    std::vector<PureState> states;
    ComplexMatrix raw(dim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      PureState psi = random_pure(dim, g);
      raw.col(i) = psi.amplitudes();
      states.push_back(std::move(psi));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(raw.adjoint() * raw));
    if (es.eigenvalues().minCoeff() > 1e-6) return states;
  }
}

/// rho = sum_i p_i |psi_i><psi_i| together with its derivative sum_i dp_i |psi_i><psi_i|.
inline std::pair<DensityOperator, ComplexMatrix> assemble_ensemble(
    const std::vector<PureState>& basis, const RealVector& probs, const RealVector& dprobs) {
  const Eigen::Index d = basis.front().dim();
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  ComplexMatrix drho = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const ComplexMatrix proj = basis[i].projector();
    rho += probs(static_cast<Eigen::Index>(i)) * proj;
    drho += dprobs(static_cast<Eigen::Index>(i)) * proj;
  }
  return {DensityOperator(rho), hermitian_part(drho)};
}

}  // namespace qfi::test
