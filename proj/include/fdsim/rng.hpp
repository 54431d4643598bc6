#pragma once

#include <cstdint>
#include <string_view>

namespace fdsim {

// SplitMix64 stream. <random> distributions are implementation-defined, so
// every random draw in the simulator goes through this to keep traces
// reproducible across standard libraries.
class RandomStream {
public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound). bound must be > 0; bias is negligible for the
    // small bounds used here (peer selection).
    std::uint64_t next_below(std::uint64_t bound) {
        return next_u64() % bound;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    std::uint64_t state_ = 0;
};

// FNV-1a over arbitrary strings, used to derive named substream seeds and to
// hash trace files for determinism checks.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed for the substream identified by (domain, name) under a scenario seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain, std::string_view name) {
    std::uint64_t h = fnv1a64(domain);
    h = fnv1a64("/", h);
    h = fnv1a64(name, h);
    return h ^ (seed * 0x9e3779b97f4a7c15ULL);
}

}  // namespace fdsim
