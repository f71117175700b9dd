#pragma once

#include <cstdint>
#include <random>

namespace sailkit {

// Deterministic random source. Same seed, same stream. Parallel or
// logically independent consumers must not share one Rng; derive child
// generators with split(), which mixes the parent seed with a stream
// index via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const { return seed_; }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double gaussian(double mean, double stddev) {
        // One-shot normal_distribution: avoids the cached second variate
        // so interleaved draws stay reproducible.
        std::normal_distribution<double> dist(mean, stddev);
        return dist(engine_);
    }

    // Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    Rng split(std::uint64_t stream) const {
        return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace sailkit
