#pragma once

#include <cstdint>

namespace seqmct {

/// SplitMix64 mixing function (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent substream seed from a master seed and a stream
/// index. Streams for distinct indices are decorrelated by double mixing,
/// so per-hypothesis (or per-run) generators can be created independently
/// and in any order.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64_mix(master ^ splitmix64_mix(stream + 0x632be59bd9b4e019ULL));
}

/// Small, fast, fully specified PRNG. 8 bytes of state per stream, which
/// keeps one-generator-per-hypothesis layouts cheap even for large m.
class SplitMix64 {
public:
    SplitMix64() = default;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_ = 0;
};

}  // namespace seqmct
