#pragma once

#include <cstdint>
#include <random>

namespace eqfs {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for one (seed, generation, offspring) cell. Scheduling
/// order never changes which numbers an offspring sees.
inline Rng substream(std::uint64_t seed, std::uint64_t generation, std::uint64_t index) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ generation);
    h = mix64(h ^ (index + 0x5851f42d4c957f2dULL));
    return Rng(h);
}

}  // namespace eqfs
