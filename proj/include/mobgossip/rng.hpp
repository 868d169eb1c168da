#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace mobgossip {

// Deterministic, label-addressed random stream. Every random draw in the
// project flows through one of these; a (seed, label) pair identifies a
// stream completely, so replays and parallel fan-out stay reproducible.
//
// Seeding: the label bytes are folded into the seed with FNV-1a, then the
// combined word is expanded through splitmix64 into the four words of a
// xoshiro256** state. Distinct labels land in unrelated states.
class RngStream {
public:
    RngStream() : RngStream(0, "") {}

    RngStream(std::uint64_t seed, std::string_view label) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : label) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        std::uint64_t x = mix(seed) ^ h;
        for (auto& word : state_) {
            word = splitmix(x);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 1;  // xoshiro must not start from the all-zero state
        }
    }

    std::uint64_t next_u64() {
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

    // Uniform double in [0, 1), 53 bits of precision.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound); bound must be nonzero. Rejection keeps
    // the draw exactly uniform.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    bool next_bernoulli(double p) {
        return next_unit() < p;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ull;
        return mix(x);
    }

    std::array<std::uint64_t, 4> state_{};
};

inline RngStream derive_stream(std::uint64_t seed, std::string_view label) {
    return RngStream(seed, label);
}

}  // namespace mobgossip
