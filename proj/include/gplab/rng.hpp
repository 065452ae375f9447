#pragma once

#include <cstdint>

namespace gplab {

// Counter-based generator: the stream for (seed, index) is independent of
// evaluation order, so parallel sampling is reproducible bit-for-bit.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t counter_rng(uint64_t seed, uint64_t index, uint64_t lane = 0) {
    return splitmix64(splitmix64(seed ^ 0x6a09e667f3bcc909ull) + splitmix64(index) + lane * 0x9e3779b97f4a7c15ull);
}

// uniform in [0, 1)
inline double u01(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace gplab
