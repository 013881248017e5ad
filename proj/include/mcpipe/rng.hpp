#pragma once

#include <cmath>
#include <cstdint>

namespace mcpipe {

// splitmix64. The output sequence is fully determined by the 64-bit input,
// so draws reproduce bit-exactly across platforms and compilers (unlike the
// std:: distributions, whose algorithms are implementation-defined).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-mode draw i of stream `stream` under `seed`. Keyed hashing instead
// of sequential state, so samples can be generated in any order (and in
// parallel) without changing their values.
inline std::uint64_t rng_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    return splitmix64(splitmix64(splitmix64(seed) + stream) + i);
}

inline double rng_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    // (0, 1]; never 0 so log() below is safe
    return static_cast<double>((rng_word(seed, stream, i) >> 11) + 1) * 0x1.0p-53;
}

inline int rng_bit(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    return static_cast<int>(rng_word(seed, stream, i) & 1u);
}

// Standard normal via Box-Muller on two counter draws.
inline double rng_gauss(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    const double u1 = rng_u01(seed, stream, 2 * i);
    const double u2 = rng_u01(seed, stream, 2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace mcpipe
