#pragma once

#include <cstdint>

namespace cuckoo {

// SplitMix64. Standard-library distributions are not bit-portable across
// implementations; this is, and byte-identical traces depend on it.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform-enough draw in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

// Stateless deterministic mix for per-envelope adversary decisions.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ 0xD6E8FEB86659FD93ULL);
    return g.next();
}

} // namespace cuckoo
