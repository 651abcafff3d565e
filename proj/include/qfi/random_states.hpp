#pragma once

#include <cstdint>
#include <random>

#include "qfi/states.hpp"

namespace qfi {

/// Random density matrix of the given rank, drawn by the Ginibre construction
/// G G^dag / Tr(G G^dag) with G a dim x rank matrix of standard complex
/// Gaussians. Same seed, same matrix.
DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed,
                               const Tolerances& tol = {});
DensityOperator random_density(Eigen::Index dim, Eigen::Index rank, std::mt19937_64& rng,
                               const Tolerances& tol = {});

PureState random_pure(Eigen::Index dim, std::mt19937_64& rng, const Tolerances& tol = {});

/// Haar-ish random unitary via QR of a Ginibre matrix with phase correction.
ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

/// Random Hermitian matrix with O(1) entries.
ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace qfi
