#pragma once

#include <cstdint>
#include <random>

#include "expgrad/density.hpp"

namespace expgrad {

using Rng = std::mt19937_64;

/// Independent generator for consumer `index` of a command seeded with `seed`.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Hermitian matrix with i.i.d. complex Gaussian entries, scaled to unit Frobenius norm.
HermitianOperator random_hermitian(int dim, Rng& rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int dim, Rng& rng);

/// exp(S) / tr exp(S) with S = scale * random_hermitian.
DensityState random_density(int dim, Rng& rng, double scale = 1.0);

/// A^H A for a complex Gaussian A; positive semi-definite by construction.
HermitianOperator random_psd(int dim, Rng& rng);

/// Point of the simplex with Dirichlet(1) entries, bounded away from zero.
ProbabilityVector random_probability(int dim, Rng& rng);

}  // namespace expgrad
