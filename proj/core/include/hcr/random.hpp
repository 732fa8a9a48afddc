#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hcr {

/// All randomness in the library is drawn from a 64-bit Mersenne Twister.
/// The engine's output sequence is fixed by the C++ standard; the helpers
/// below avoid the implementation-defined std:: distributions so that
/// seeded results are identical across standard libraries.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform integer in [0, bound) by rejection; bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

} // namespace hcr
