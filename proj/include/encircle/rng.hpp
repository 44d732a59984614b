#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>

namespace encircle {

/// Seeded random stream with a fully specified sample path: the same seed
/// yields the same sequence on every platform. Gaussian draws go through
/// Box-Muller on raw 53-bit uniforms instead of std::normal_distribution,
/// whose algorithm is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw. Consumes exactly two uniforms.
    double gaussian() {
        // 1 - u in (0, 1], keeps the log argument away from zero
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double gaussian(double mean, double stddev) {
        return mean + stddev * gaussian();
    }

    bool bernoulli(double p) {
        if (p < 0.0 || p > 1.0) {
            throw std::invalid_argument("bernoulli probability must be in [0, 1]");
        }
        return uniform01() < p;
    }

    /// Independent child stream. Streams split from the same parent with
    /// different indices are decorrelated; the construction is deterministic.
    RngStream split(std::uint64_t index) const {
        std::uint64_t x = seed_ ^ (0x9E3779B97F4A7C15ULL * (index + 1));
        // splitmix64 finalizer
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        x = x ^ (x >> 31);
        return RngStream(x);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace encircle
