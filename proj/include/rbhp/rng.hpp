#pragma once

#include <cstdint>
#include <vector>

namespace rbhp {

// splitmix64 step; used both as a standalone mixer and to derive
// child seeds from (parent seed, tag) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0x517cc1b727220a95ULL * (tag + 1));
    return splitmix64(s);
}

// Deterministic uniform generator. std::uniform_real_distribution is
// implementation-defined, so doubles are produced directly from the
// raw 64-bit stream to keep results identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds do not produce correlated leading draws
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0,1), 53-bit resolution
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform index in [0, n)
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
    }

private:
    std::uint64_t state_;
};

}  // namespace rbhp
