#pragma once

#include <array>
#include <cstdint>

namespace ruvn {

/// SplitMix64 (Steele, Lea & Flood). Used only to expand a 64-bit seed into
/// generator state; one step is a bijective mix of an additive counter.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// xoshiro256** (Blackman & Vigna): the project-wide deterministic generator.
/// Streams are split by (seed, stream): each stream's 256-bit state is drawn
/// from a SplitMix64 keyed on both values, so replications never share state.
class Xoshiro256 {
public:
    Xoshiro256() : Xoshiro256(0, 0) {}

    Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        for (auto& word : state_) word = sm.next();
    }

    static Xoshiro256 split(std::uint64_t seed, std::uint64_t stream) {
        return Xoshiro256(seed, stream);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits; never returns 1.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) from a single 64-bit draw
    /// (Lemire multiply-shift; bias is O(bound / 2^64), irrelevant here).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    friend bool operator==(const Xoshiro256& a, const Xoshiro256& b) {
        return a.state_ == b.state_;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace ruvn
