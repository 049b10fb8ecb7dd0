#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace mmtsp {

// mt19937_64 has a standardized output sequence; the helpers below avoid the
// std distributions, whose output is implementation-defined.
using Rng = std::mt19937_64;

// Substream for item `index` of a run seeded with `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(seed ^ index); }

// Uniform double in [0, 1) from the top 53 bits of one draw.
template <class URBG>
double uniform01(URBG& rng) {
    static_assert(URBG::min() == 0 && URBG::max() == UINT64_MAX, "expects a full 64-bit generator");
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class URBG>
double uniform_real(URBG& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

template <class URBG>
double uniform_angle(URBG& rng) {
    return 2.0 * std::numbers::pi * uniform01(rng);
}

// Uniform integer in [0, n) by rejection, n > 0.
template <class URBG>
std::uint64_t uniform_index(URBG& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace mmtsp
