#pragma once

#include <cstdint>
#include <cmath>

namespace dostrace::rng {

// Counter-based generator: every draw is a pure function of (seed, stream,
// index), so results do not depend on evaluation order or thread count.
inline uint64_t mix(uint64_t seed, uint64_t stream, uint64_t index) {
    uint64_t z = seed * 0x9E3779B97F4A7C15ull
               + stream * 0xD1B54A32D192ED03ull
               + index * 0xBF58476D1CE4E5B9ull
               + 0x2545F4914F6CDD1Dull;
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27; z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Uniform in [0,1).
inline double uniform(uint64_t seed, uint64_t stream, uint64_t index) {
    return static_cast<double>(mix(seed, stream, index) >> 11) * 0x1.0p-53;
}

inline double uniform_ab(uint64_t seed, uint64_t stream, uint64_t index,
                         double a, double b) {
    return a + (b - a) * uniform(seed, stream, index);
}

inline double rademacher(uint64_t seed, uint64_t stream, uint64_t index) {
    return (mix(seed, stream, index) & 1ull) ? 1.0 : -1.0;
}

// Box-Muller on two counter draws; index k consumes counters 2k, 2k+1.
inline double gaussian(uint64_t seed, uint64_t stream, uint64_t index) {
    double u1 = uniform(seed, stream, 2 * index);
    double u2 = uniform(seed, stream, 2 * index + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace dostrace::rng
