#include "cvcov/rng.hpp"

#include <stdexcept>

namespace cvcov {

std::uint64_t seeded_rng::index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("seeded_rng::index: empty range");
  // Lemire's nearly-divisionless bounded draw.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double seeded_rng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace cvcov
