#include "hcr/random.hpp"

#include <numeric>

namespace hcr {

double
uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t
uniform_below(Rng& rng, std::uint64_t bound)
{
  // largest multiple of bound that fits, to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw > limit);
  return draw % bound;
}

std::vector<std::size_t>
random_permutation(std::size_t n, Rng& rng)
{
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{ 0 });
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

} // namespace hcr
