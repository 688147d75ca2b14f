#pragma once

#include <cstdint>
#include <random>

namespace fppcm {

// splitmix64 step; used both as a mixer and to expand seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed derivation: mixes the master seed with a list of
// stream identifiers (n, replica, stage, ...). Replicas never share an
// RNG stream.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = master ^ 0xa0761d6478bd642fULL;
    for (std::uint64_t p : parts) {
        s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        splitmix64(s);
    }
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace fppcm
