#pragma once

#include "sdm/types.hpp"

#include <random>

namespace sdm {

using Rng = std::mt19937_64;

/// Ginibre matrix (iid standard complex normal entries).
Matrix random_ginibre(Rng& rng, Index rows, Index cols);

/// Haar-random unitary via QR of a Ginibre matrix.
Matrix random_unitary(Rng& rng, Index d);

/// Random density matrix G G^dag / Tr(..) with the given rank.
Matrix random_density(Rng& rng, Index d, Index rank = 0);

/// Random Hermitian matrix with entries O(1).
Matrix random_hermitian(Rng& rng, Index d);

/// Haar-random pure state as a density matrix.
Matrix random_pure_density(Rng& rng, Index d);

Vector random_state_vector(Rng& rng, Index d);

}  // namespace sdm
