#pragma once

// Free-space optical intensity channel with signal-dependent and
// signal-independent Gaussian noise: y = x + sqrt(x)*z1 + z0 with
// z1 ~ N(0, xi2) and z0 ~ N(0, sigma2), independent per sample.

#include "owc/spectral.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace owc {

struct NoiseConfig {
    double xi2 = 0.0;    // variance of the signal-dependent term
    double sigma2 = 0.0; // variance of the additive term
};

// (seed, stream_id) pairs key independent deterministic random streams, so
// serial and parallel simulation runs draw identical noise per symbol.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngSeed with_stream(std::uint64_t stream) const { return {seed, stream}; }
};

class RngStream {
public:
    explicit RngStream(RngSeed s);

    double gaussian();
    int bit();
    BitBlock bits(std::size_t count);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

/// Apply the channel to a non-negative frame. Output may be negative.
/// Throws std::invalid_argument on a negative input sample or a negative
/// noise variance.
std::vector<double> apply_channel(std::span<const double> tx, const NoiseConfig& noise, RngSeed rng);

} // namespace owc
