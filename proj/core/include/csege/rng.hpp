#pragma once

#include <cstdint>

namespace csege {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed for (realization, stream) under a master seed. No
/// generator state is shared between realizations, so results do not depend
/// on the order in which realizations are processed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t realization,
                                    std::uint64_t stream = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ realization) ^ (stream * 0xd1b54a32d192ed03ULL));
}

}  // namespace csege
