#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "entkit/linalg.hpp"

namespace entkit {

using Rng = std::mt19937_64;

/// Independent stream seed for (seed, stream) via splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Vector of i.i.d. standard complex Gaussians.
ComplexVector gaussian_vector(std::size_t n, Rng& rng);
ComplexVector random_unit_vector(std::size_t n, Rng& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
/// Random Hermitian matrix with Gaussian entries.
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);
/// Flat Dirichlet sample, not sorted.
std::vector<double> random_simplex_point(std::size_t n, Rng& rng);

}  // namespace entkit
