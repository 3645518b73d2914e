#include "owc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace owc {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

RngStream::RngStream(RngSeed s)
    : engine_(splitmix64(splitmix64(s.seed) ^ splitmix64(~s.stream_id)))
{
}

double RngStream::gaussian()
{
    return normal_(engine_);
}

int RngStream::bit()
{
    if (bits_left_ == 0) {
        bit_buffer_ = engine_();
        bits_left_ = 64;
    }
    const int b = static_cast<int>(bit_buffer_ & 1u);
    bit_buffer_ >>= 1;
    --bits_left_;
    return b;
}

BitBlock RngStream::bits(std::size_t count)
{
    BitBlock out(count);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(bit());
    return out;
}

std::vector<double> apply_channel(std::span<const double> tx, const NoiseConfig& noise, RngSeed rng)
{
    if (noise.xi2 < 0.0 || noise.sigma2 < 0.0 || !std::isfinite(noise.xi2) || !std::isfinite(noise.sigma2))
        throw std::invalid_argument("noise variances must be finite and non-negative");

    const double dep = std::sqrt(noise.xi2);
    const double ind = std::sqrt(noise.sigma2);

    RngStream stream(rng);
    std::vector<double> out(tx.size());
    for (std::size_t k = 0; k < tx.size(); ++k) {
        const double x = tx[k];
        if (x < 0.0)
            throw std::invalid_argument("transmitted sample must be non-negative");
        // draw both terms unconditionally so streams stay aligned across
        // noise configurations
        const double z1 = stream.gaussian();
        const double z0 = stream.gaussian();
        out[k] = x + std::sqrt(x) * dep * z1 + ind * z0;
    }
    return out;
}

} // namespace owc
