#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sceneforge {

/// Deterministic random source. mt19937_64 raw output is pinned by the
/// standard, and all distributions here are implemented by hand, so a
/// (seed, stream) pair produces the same values on every platform and
/// toolchain. The std <random> distributions are deliberately not used:
/// their output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Stream for one image: hash(seed, image_index). Images can therefore
    /// be generated in any order and on any number of threads.
    static Rng for_image(std::uint64_t seed, std::uint64_t image_index) {
        return Rng(mix(seed, image_index));
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        return splitmix64(seed ^ splitmix64(index + 0x9e3779b97f4a7c15ull));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, bound). bound must be > 0. Lemire's multiply-shift
    /// bounded draw; consumes exactly one engine value.
    std::uint32_t uniform_u32(std::uint32_t bound) {
        const std::uint64_t x = next_u64() >> 32;
        return static_cast<std::uint32_t>((x * bound) >> 32);
    }

    /// Uniform integer in [lo, hi], both inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform_u32(static_cast<std::uint32_t>(hi - lo + 1)));
    }

    /// Uniform real in [0, 1) with 53 bits of precision.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller; consumes two engine values. sigma == 0 returns the mean
    /// exactly (and still consumes both values, keeping stream shape fixed).
    double normal(double mean, double sigma) {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * 3.14159265358979323846 * u2);
        return mean + sigma * z;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace sceneforge
