#pragma once

#include <array>
#include <cstdint>

namespace distlearn {

// SplitMix64 finalizer (xor-shift-multiply avalanche, Stafford mix13
// constants). Bijective on 64-bit words; the basis of both engine seeding
// and derived trial streams. The constants below are part of the
// reproducibility contract and must not change.
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Purpose tags keep seed streams for distinct uses disjoint. Values are
// fixed; new uses get new tags.
enum SeedPurpose : std::uint64_t {
    kSweepDrawTag = 1,
    kGapDrawTag = 2,
    kOccupancyTrialTag = 3,
    kGeneratorSplitTag = 4,
};

// Derives an independent 64-bit stream seed from up to four words by
// absorbing each through the finalizer. Injective in the last word for
// fixed prefixes (mix64 is a bijection), so per-trial seeds never collide.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                                    std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = master;
    h = mix64(h ^ (purpose + kGoldenGamma));
    h = mix64(h ^ (a + kGoldenGamma));
    h = mix64(h ^ (b + kGoldenGamma));
    return h;
}

// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed
// through SplitMix64.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += kGoldenGamma;
            word = mix64(sm);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGoldenGamma;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5ULL, 7) * 9ULL;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // 53-bit uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // unbiased uniform integer in [0, bound)
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace distlearn
