#include "spanforge/rng.hpp"

#include <cmath>

namespace spanforge {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state) ^ stream_id;
    std::uint32_t words[8];
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t v = splitmix64(mixed);
        words[2 * i] = static_cast<std::uint32_t>(v);
        words[2 * i + 1] = static_cast<std::uint32_t>(v >> 32);
    }
    std::seed_seq seq(std::begin(words), std::end(words));
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() {
    return std::generate_canonical<double, 53>(engine_);
}

double RngStream::chi_square(double df) {
    if (df <= 64.0 && df == std::floor(df)) {
        double s = 0.0;
        for (int i = 0; i < static_cast<int>(df); ++i) {
            const double z = normal();
            s += z * z;
        }
        return s;
    }
    std::gamma_distribution<double> gamma(0.5 * df, 2.0);
    return gamma(engine_);
}

}  // namespace spanforge
