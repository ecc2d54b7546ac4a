#pragma once

#include <cstdint>

namespace detper {

/// splitmix64 finalizer (Steele, Lea, Flood; constants from Vigna's reference
/// implementation). Used both for seed mixing and stream derivation so that
/// experiment streams are reproducible across platforms.
inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a root seed and up to two indices.
/// Each argument is absorbed through one splitmix64 step.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = root;
    std::uint64_t z = splitmix64_step(s);
    s = z ^ a;
    z = splitmix64_step(s);
    s = z ^ b;
    return splitmix64_step(s);
}

/// xoshiro256** (Blackman-Vigna), state seeded via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_step(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Unbiased draw in [0, n) by rejection sampling.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

} // namespace detper
