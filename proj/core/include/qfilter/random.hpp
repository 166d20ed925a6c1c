#pragma once

// Seeded generators for random operators and states. Used by the identity
// suites behind `verify` and by the tests.

#include <cstdint>
#include <random>
#include <vector>

#include "qfilter/operator.hpp"

namespace qfilter {

using Rng = std::mt19937_64;

/// Complex Ginibre matrix, entries with independent standard normal parts.
ComplexMatrix random_complex_matrix(int dim, Rng& rng);
ComplexMatrix random_hermitian(int dim, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int dim, Rng& rng);
/// Full-rank random density matrix G G† / tr(G G†).
DensityMatrix random_density(int dim, Rng& rng);
complex random_complex(Rng& rng, double scale = 1.0);

/// `count` commuting Hermitian matrices sharing a random eigenbasis. Each
/// member takes values from a small integer palette so degenerate joint
/// eigenspaces occur.
std::vector<ComplexMatrix> random_commuting_family(int dim, int count, Rng& rng);

/// 64-bit mixing function (splitmix64 finalizer).
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qfilter
