#pragma once

#include <cmath>
#include <cstdint>

namespace elsa {

/// splitmix64 step; used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive the seed of a numbered substream from a root seed. Trials,
/// anchors, and attack draws each get their own stream so results do
/// not depend on iteration order or on which anchors happen to draw.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t stream) {
    return splitmix64(splitmix64(root ^ 0x6a09e667f3bcc909ULL) + stream);
}

/// Small deterministic PRNG (xoshiro-free, single splitmix64 chain).
/// Gaussian draws use the Marsaglia polar method with no cached spare,
/// so a stream's output depends only on the draw count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform double in (0, 1).
    double next_double() {
        // 53 random bits; offset by half an ulp to exclude 0.
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// N(mean, sd^2) sample. sd = 0 returns mean exactly.
    double gaussian(double mean, double sd) {
        if (sd == 0.0) return mean;
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
    }

private:
    std::uint64_t state_;
};

}  // namespace elsa
