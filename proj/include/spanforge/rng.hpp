#pragma once

// Seedable, splittable random streams. A stream is identified by a master
// seed and a stream id; both are mixed with SplitMix64 into the seed sequence
// of a std::mt19937_64, so stream (s, i) reproduces the same draws on every
// run of one build regardless of how trials are scheduled.

#include <cstdint>
#include <random>

namespace spanforge {

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    double normal();
    /// Uniform on [0, 1).
    double uniform();
    /// Chi-square with `df` degrees of freedom: a sum of squared normals for
    /// integer df <= 64, a gamma draw otherwise.
    double chi_square(double df);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spanforge
