#include "owc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace owc {

bool is_power_of_two(std::size_t n)
{
    return n != 0 && (n & (n - 1)) == 0;
}

namespace {

// Twiddle factors exp(sign * j*2*pi*k/n), k < n/2. Cached per thread so the
// transforms stay pure functions with no shared mutable state.
const std::vector<cpx>& twiddle_table(std::size_t n, bool inverse)
{
    thread_local std::unordered_map<std::uint64_t, std::vector<cpx>> cache;
    const std::uint64_t key = (static_cast<std::uint64_t>(n) << 1) | (inverse ? 1u : 0u);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;

    std::vector<cpx> tw(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k)
        tw[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    return cache.emplace(key, std::move(tw)).first->second;
}

// Iterative radix-2 Cooley-Tukey, in place.
void fft_in_place(std::vector<cpx>& a, bool inverse)
{
    const std::size_t n = a.size();
    if (n <= 1)
        return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    const auto& tw = twiddle_table(n, inverse);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cpx w = tw[k * stride];
                const cpx u = a[base + k];
                const cpx v = a[base + k + len / 2] * w;
                a[base + k] = u + v;
                a[base + k + len / 2] = u - v;
            }
        }
    }
}

void require_pow2(std::size_t n)
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("transform length must be a power of two, got " + std::to_string(n));
}

} // namespace

std::vector<cpx> idft(std::span<const cpx> spectrum)
{
    require_pow2(spectrum.size());
    std::vector<cpx> out(spectrum.begin(), spectrum.end());
    fft_in_place(out, true);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out)
        v *= scale;
    return out;
}

std::vector<cpx> dft(std::span<const cpx> samples)
{
    require_pow2(samples.size());
    std::vector<cpx> out(samples.begin(), samples.end());
    fft_in_place(out, false);
    return out;
}

std::vector<cpx> dft_real(std::span<const double> samples)
{
    std::vector<cpx> in(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        in[i] = cpx(samples[i], 0.0);
    return dft(in);
}

std::vector<double> real_part(std::span<const cpx> samples)
{
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out[i] = samples[i].real();
    return out;
}

SpectrumFrame build_hs_spectrum(std::span<const cpx> data, std::size_t n)
{
    if (!is_power_of_two(n) || n < 8)
        throw std::invalid_argument("frame size must be a power of two >= 8");
    if (data.size() != n / 2 - 1)
        throw std::invalid_argument("expected " + std::to_string(n / 2 - 1) + " data symbols, got "
                                    + std::to_string(data.size()));

    SpectrumFrame frame;
    frame.values.assign(n, cpx(0.0, 0.0));
    for (std::size_t m = 1; m < n / 2; ++m) {
        frame.values[m] = data[m - 1];
        frame.values[n - m] = std::conj(data[m - 1]);
    }
    frame.hs_checked = true;
    return frame;
}

void check_hermitian(SpectrumFrame& frame, double tol)
{
    const std::size_t n = frame.size();
    if (!is_power_of_two(n) || n < 8)
        throw std::invalid_argument("frame size must be a power of two >= 8");

    auto bad = [tol](cpx a, cpx b) {
        return std::abs(a.real() - b.real()) > tol || std::abs(a.imag() - b.imag()) > tol;
    };
    if (bad(frame.values[0], cpx(0, 0)) || bad(frame.values[n / 2], cpx(0, 0)))
        throw std::invalid_argument("Hermitian symmetry violated: bins 0 and N/2 must be zero");
    for (std::size_t m = 1; m < n / 2; ++m)
        if (bad(frame.values[m], std::conj(frame.values[n - m])))
            throw std::invalid_argument("Hermitian symmetry violated at bin " + std::to_string(m));
    frame.hs_checked = true;
}

std::pair<SpectrumFrame, SpectrumFrame> split_odd_even(const SpectrumFrame& frame)
{
    if (!frame.hs_checked)
        throw std::invalid_argument("split_odd_even requires a verified Hermitian-symmetric frame");

    const std::size_t n = frame.size();
    SpectrumFrame odd;
    SpectrumFrame even;
    odd.values.assign(n, cpx(0.0, 0.0));
    even.values.assign(n, cpx(0.0, 0.0));
    for (std::size_t m = 0; m < n; ++m)
        ((m & 1) ? odd : even).values[m] = frame.values[m];
    odd.hs_checked = true;
    even.hs_checked = true;
    return {std::move(odd), std::move(even)};
}

// --- QAM --------------------------------------------------------------------

int bits_per_symbol(int m)
{
    switch (m) {
    case 4: return 2;
    case 16: return 4;
    case 64: return 6;
    case 256: return 8;
    case 1024: return 10;
    case 4096: return 12;
    default:
        throw std::invalid_argument("unsupported constellation order " + std::to_string(m));
    }
}

double constellation_mean_square(int m)
{
    bits_per_symbol(m);
    return 2.0 * (m - 1) / 3.0;
}

namespace {

unsigned gray_to_binary(unsigned g)
{
    for (unsigned shift = 1; shift < 16; shift <<= 1)
        g ^= g >> shift;
    return g;
}

double axis_level(std::span<const std::uint8_t> bits, int nbits)
{
    unsigned g = 0;
    for (int i = 0; i < nbits; ++i)
        g = (g << 1) | (bits[static_cast<std::size_t>(i)] & 1u);
    const int levels = 1 << nbits;
    return 2.0 * static_cast<double>(gray_to_binary(g)) - (levels - 1);
}

int nearest_level_index(double x, int levels)
{
    // Index of the nearest grid level; half-way points round down so ties
    // resolve toward the smaller coordinate.
    const double v = (x + (levels - 1)) / 2.0;
    const auto idx = static_cast<long>(std::ceil(v - 0.5));
    return static_cast<int>(std::clamp(idx, 0L, static_cast<long>(levels - 1)));
}

void axis_bits(double x, int nbits, std::uint8_t* out)
{
    const int levels = 1 << nbits;
    const unsigned v = static_cast<unsigned>(nearest_level_index(x, levels));
    const unsigned g = v ^ (v >> 1);
    for (int i = 0; i < nbits; ++i)
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((g >> (nbits - 1 - i)) & 1u);
}

} // namespace

cpx qam_map_symbol(std::span<const std::uint8_t> bits, int m)
{
    const int nb = bits_per_symbol(m);
    if (bits.size() != static_cast<std::size_t>(nb))
        throw std::invalid_argument("qam_map_symbol: wrong bit group size");
    const int half = nb / 2;
    return {axis_level(bits.subspan(0, half), half),
            axis_level(bits.subspan(static_cast<std::size_t>(half), half), half)};
}

std::vector<cpx> qam_map(std::span<const std::uint8_t> bits, int m)
{
    const int nb = bits_per_symbol(m);
    if (bits.size() % static_cast<std::size_t>(nb) != 0)
        throw std::invalid_argument("bit count must be divisible by log2(M)");
    std::vector<cpx> out(bits.size() / static_cast<std::size_t>(nb));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = qam_map_symbol(bits.subspan(i * static_cast<std::size_t>(nb), static_cast<std::size_t>(nb)), m);
    return out;
}

void qam_demap_symbol(cpx s, int m, std::uint8_t* out)
{
    const int half = bits_per_symbol(m) / 2;
    axis_bits(s.real(), half, out);
    axis_bits(s.imag(), half, out + half);
}

BitBlock qam_demap(std::span<const cpx> symbols, int m)
{
    const int nb = bits_per_symbol(m);
    BitBlock out(symbols.size() * static_cast<std::size_t>(nb));
    for (std::size_t i = 0; i < symbols.size(); ++i)
        qam_demap_symbol(symbols[i], m, out.data() + i * static_cast<std::size_t>(nb));
    return out;
}

cpx slice_to_grid(cpx s, int m)
{
    const int half = bits_per_symbol(m) / 2;
    const int levels = 1 << half;
    return {2.0 * nearest_level_index(s.real(), levels) - (levels - 1),
            2.0 * nearest_level_index(s.imag(), levels) - (levels - 1)};
}

} // namespace owc
