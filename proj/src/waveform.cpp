#include "owc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace owc {

void validate_config(const WaveformConfig& cfg)
{
    if (!is_power_of_two(static_cast<std::size_t>(cfg.n)) || cfg.n < 8)
        throw std::invalid_argument("frame size must be a power of two >= 8");
    bits_per_symbol(cfg.m);
    switch (cfg.kind) {
    case WaveformKind::Dco:
        if (!(cfg.mu >= 0.0) || !std::isfinite(cfg.mu))
            throw std::invalid_argument("dco bias multiplier must be finite and >= 0");
        break;
    case WaveformKind::X1:
        if (cfg.candidate < 0 || cfg.candidate > 3)
            throw std::invalid_argument("x1 candidate must be in 0..3");
        break;
    case WaveformKind::X2:
        if (cfg.candidate < 0 || cfg.candidate > 1)
            throw std::invalid_argument("x2 candidate must be in 0..1");
        break;
    default:
        break;
    }
}

int data_subcarrier_count(WaveformKind kind, int n)
{
    return kind == WaveformKind::Aco ? n / 4 : n / 2 - 1;
}

int tx_frame_length(WaveformKind kind, int n)
{
    switch (kind) {
    case WaveformKind::X1:
    case WaveformKind::X2: return 3 * n / 2;
    case WaveformKind::U: return 2 * n;
    default: return n;
    }
}

int bits_per_frame(const WaveformConfig& cfg)
{
    return data_subcarrier_count(cfg.kind, cfg.n) * bits_per_symbol(cfg.m);
}

const char* waveform_name(WaveformKind kind)
{
    switch (kind) {
    case WaveformKind::Dco: return "dco";
    case WaveformKind::Aco: return "aco";
    case WaveformKind::U: return "u";
    case WaveformKind::X1: return "x1";
    case WaveformKind::X2: return "x2";
    }
    return "?";
}

namespace {

std::vector<double> positive_part(std::span<const double> x, std::size_t count)
{
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = (std::abs(x[k]) + x[k]) / 2.0;
    return out;
}

std::vector<double> negative_part(std::span<const double> x, std::size_t count)
{
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = (std::abs(x[k]) - x[k]) / 2.0;
    return out;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b)
{
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        out[k] = a[k] + b[k];
    return out;
}

// Time-domain halves of the odd-bin and even-bin signals for a data frame.
struct SplitTime {
    std::vector<double> x_odd;  // antisymmetric, length n
    std::vector<double> x_even; // symmetric, length n
};

SplitTime split_time_signals(std::span<const cpx> data, int n)
{
    SpectrumFrame spec = build_hs_spectrum(data, static_cast<std::size_t>(n));
    auto [odd, even] = split_odd_even(spec);
    return {real_part(idft(odd.values)), real_part(idft(even.values))};
}

// Which pair sums are transmitted, in block order. Candidate 0 is the
// reference mixing (A+C), (B+C), (B+D); the rest are the remaining
// leave-one-out triples.
enum Block { AC = 0, BC = 1, BD = 2, AD = 3 };

constexpr std::array<std::array<Block, 3>, 4> kX1Candidates = {{
    {AC, BC, BD},
    {AC, BC, AD},
    {AC, BD, AD},
    {BC, BD, AD},
}};

std::array<std::vector<double>, 4> block_sums(const QuarterParts& p)
{
    return {add(p.a, p.c), add(p.b, p.c), add(p.b, p.d), add(p.a, p.d)};
}

void check_rx_length(std::span<const double> rx, const WaveformConfig& cfg)
{
    const auto expected = static_cast<std::size_t>(tx_frame_length(cfg.kind, cfg.n));
    if (rx.size() != expected)
        throw std::invalid_argument("received frame length " + std::to_string(rx.size()) + ", expected "
                                    + std::to_string(expected));
}

std::vector<cpx> read_data_bins(std::span<const cpx> spectrum, int n)
{
    std::vector<cpx> out;
    out.reserve(static_cast<std::size_t>(n / 2 - 1));
    for (int m = 1; m < n / 2; ++m)
        out.push_back(spectrum[static_cast<std::size_t>(m)]);
    return out;
}

ModemOutput finish(std::vector<cpx> symbols, int m)
{
    ModemOutput out;
    out.bits = qam_demap(symbols, m);
    out.data_symbols = std::move(symbols);
    return out;
}

} // namespace

QuarterParts extract_parts(std::span<const double> x_odd, std::span<const double> x_even, double tol)
{
    const std::size_t n = x_odd.size();
    if (x_even.size() != n || !is_power_of_two(n) || n < 8)
        throw std::invalid_argument("extract_parts: frames must share a power-of-two length >= 8");
    for (std::size_t k = 0; k < n / 2; ++k) {
        if (std::abs(x_odd[k] + x_odd[k + n / 2]) > tol)
            throw std::invalid_argument("extract_parts: odd-bin signal is not antisymmetric");
        if (std::abs(x_even[k] - x_even[k + n / 2]) > tol)
            throw std::invalid_argument("extract_parts: even-bin signal is not symmetric");
    }
    return {positive_part(x_odd, n / 2), negative_part(x_odd, n / 2),
            positive_part(x_even, n / 2), negative_part(x_even, n / 2)};
}

// --- x1: non-successive mixing ----------------------------------------------

TxFrame x1_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg)
{
    validate_config(cfg);
    const auto st = split_time_signals(data_symbols, cfg.n);
    const QuarterParts parts = extract_parts(st.x_odd, st.x_even);
    const auto sums = block_sums(parts);

    TxFrame tx;
    tx.reserve(static_cast<std::size_t>(3 * cfg.n / 2));
    for (Block b : kX1Candidates[static_cast<std::size_t>(cfg.candidate)])
        tx.insert(tx.end(), sums[b].begin(), sums[b].end());
    return tx;
}

std::pair<std::vector<double>, std::vector<double>>
x1_demix(std::span<const double> rx, const WaveformConfig& cfg)
{
    validate_config(cfg);
    check_rx_length(rx, cfg);
    const std::size_t half = static_cast<std::size_t>(cfg.n) / 2;

    std::array<std::vector<double>, 4> sums;
    std::array<bool, 4> present{false, false, false, false};
    const auto& triple = kX1Candidates[static_cast<std::size_t>(cfg.candidate)];
    for (std::size_t i = 0; i < 3; ++i) {
        sums[triple[i]].assign(rx.begin() + static_cast<std::ptrdiff_t>(i * half),
                               rx.begin() + static_cast<std::ptrdiff_t>((i + 1) * half));
        present[triple[i]] = true;
    }

    // (A+C) + (B+D) == (B+C) + (A+D) recovers whichever sum was left out.
    auto recover = [&](Block missing, Block p1, Block p2, Block q) {
        sums[missing].resize(half);
        for (std::size_t k = 0; k < half; ++k)
            sums[missing][k] = sums[p1][k] + sums[p2][k] - sums[q][k];
    };
    if (!present[AD])
        recover(AD, AC, BD, BC);
    else if (!present[BD])
        recover(BD, BC, AD, AC);
    else if (!present[BC])
        recover(BC, AC, BD, AD);
    else
        recover(AC, BC, AD, BD);

    std::vector<double> l(half), r(half);
    for (std::size_t k = 0; k < half; ++k) {
        l[k] = sums[AC][k] - sums[BD][k];
        r[k] = sums[BC][k] - sums[AD][k];
    }
    return {std::move(l), std::move(r)};
}

ModemOutput x1_demodulate(std::span<const double> rx, const WaveformConfig& cfg)
{
    auto [l, r] = x1_demix(rx, cfg);
    l.insert(l.end(), r.begin(), r.end());
    const auto spectrum = dft_real(l);
    return finish(read_data_bins(spectrum, cfg.n), cfg.m);
}

// --- x2: successive mixing ----------------------------------------------------

TxFrame x2_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg)
{
    validate_config(cfg);
    const auto st = split_time_signals(data_symbols, cfg.n);
    const QuarterParts parts = extract_parts(st.x_odd, st.x_even);

    TxFrame tx;
    tx.reserve(static_cast<std::size_t>(3 * cfg.n / 2));
    const auto append = [&tx](const std::vector<double>& v) { tx.insert(tx.end(), v.begin(), v.end()); };
    if (cfg.candidate == 0) {
        append(add(parts.a, parts.c));
        append(add(parts.b, parts.c));
        append(parts.d);
    } else {
        append(add(parts.a, parts.d));
        append(add(parts.b, parts.d));
        append(parts.c);
    }
    return tx;
}

ModemOutput x2_demodulate(std::span<const double> rx, const WaveformConfig& cfg)
{
    validate_config(cfg);
    check_rx_length(rx, cfg);
    const auto n = static_cast<std::size_t>(cfg.n);
    const std::size_t half = n / 2;

    // Stage 1: the first N points carry the odd bins at half amplitude.
    const auto head = dft_real(rx.subspan(0, n));
    std::vector<cpx> odd_symbols;
    odd_symbols.reserve(n / 4);
    for (std::size_t m = 1; m < half; m += 2)
        odd_symbols.push_back(2.0 * head[m]);

    // Stage 2: regenerate the antisymmetric time signal from the recovered
    // odd bins (optionally hard-sliced first) and re-extract its parts.
    std::vector<cpx> odd_spec(n, cpx(0.0, 0.0));
    if (cfg.slice_before_reconstruct) {
        std::size_t i = 0;
        for (std::size_t m = 1; m < half; m += 2, ++i) {
            const cpx s = slice_to_grid(odd_symbols[i], cfg.m);
            odd_spec[m] = s;
            odd_spec[n - m] = std::conj(s);
        }
    } else {
        for (std::size_t m = 1; m < n; m += 2)
            odd_spec[m] = 2.0 * head[m];
    }
    const auto x_odd = real_part(idft(odd_spec));
    const auto a_hat = positive_part(x_odd, half);
    const auto b_hat = negative_part(x_odd, half);

    // Stage 3: per-sample estimate of the leftover even-signal part from
    // the two received pair sums, then combine with the tail block.
    std::vector<double> est(half);
    for (std::size_t k = 0; k < half; ++k) {
        const double from_a = rx[k] - a_hat[k];
        const double from_b = rx[k + half] - b_hat[k];
        switch (cfg.c_estimator) {
        case CEstimator::FromA: est[k] = from_a; break;
        case CEstimator::FromB: est[k] = from_b; break;
        case CEstimator::Average: est[k] = (from_a + from_b) / 2.0; break;
        }
    }

    std::vector<double> even_time(n);
    for (std::size_t k = 0; k < half; ++k) {
        // candidate 0 transmits D in the tail and est is C; candidate 1 the reverse
        const double ce = cfg.candidate == 0 ? est[k] - rx[n + k] : rx[n + k] - est[k];
        even_time[k] = ce;
        even_time[k + half] = ce;
    }
    const auto even_spec = dft_real(even_time);

    std::vector<cpx> symbols;
    symbols.reserve(half - 1);
    std::size_t odd_idx = 0;
    for (std::size_t m = 1; m < half; ++m)
        symbols.push_back((m & 1) ? odd_symbols[odd_idx++] : even_spec[m]);
    return finish(std::move(symbols), cfg.m);
}

// --- baselines ---------------------------------------------------------------

TxFrame dco_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg)
{
    validate_config(cfg);
    const SpectrumFrame spec = build_hs_spectrum(data_symbols, static_cast<std::size_t>(cfg.n));
    auto x = real_part(idft(spec.values));
    double mean_sq = 0.0;
    for (double v : x)
        mean_sq += v * v;
    mean_sq /= static_cast<double>(x.size());
    const double bias = cfg.mu * std::sqrt(mean_sq);
    for (auto& v : x)
        v = std::max(v + bias, 0.0);
    return x;
}

ModemOutput dco_demodulate(std::span<const double> rx, const WaveformConfig& cfg)
{
    validate_config(cfg);
    check_rx_length(rx, cfg);
    const auto spectrum = dft_real(rx);
    return finish(read_data_bins(spectrum, cfg.n), cfg.m);
}

TxFrame aco_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg)
{
    validate_config(cfg);
    const auto n = static_cast<std::size_t>(cfg.n);
    if (data_symbols.size() != n / 4)
        throw std::invalid_argument("aco expects N/4 data symbols");

    std::vector<cpx> spec(n, cpx(0.0, 0.0));
    for (std::size_t i = 0; i < n / 4; ++i) {
        const std::size_t m = 2 * i + 1;
        spec[m] = data_symbols[i];
        spec[n - m] = std::conj(data_symbols[i]);
    }
    auto x = real_part(idft(spec));
    for (auto& v : x)
        v = std::max(v, 0.0);
    return x;
}

ModemOutput aco_demodulate(std::span<const double> rx, const WaveformConfig& cfg)
{
    validate_config(cfg);
    check_rx_length(rx, cfg);
    const auto spectrum = dft_real(rx);
    const auto n = static_cast<std::size_t>(cfg.n);
    std::vector<cpx> symbols;
    symbols.reserve(n / 4);
    for (std::size_t m = 1; m < n / 2; m += 2)
        symbols.push_back(2.0 * spectrum[m]); // clipping halves the odd bins
    return finish(std::move(symbols), cfg.m);
}

TxFrame u_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg)
{
    validate_config(cfg);
    const SpectrumFrame spec = build_hs_spectrum(data_symbols, static_cast<std::size_t>(cfg.n));
    const auto x = real_part(idft(spec.values));

    TxFrame tx(2 * x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        tx[k] = std::max(x[k], 0.0);
        tx[k + x.size()] = std::max(-x[k], 0.0);
    }
    return tx;
}

ModemOutput u_demodulate(std::span<const double> rx, const WaveformConfig& cfg)
{
    validate_config(cfg);
    check_rx_length(rx, cfg);
    const auto n = static_cast<std::size_t>(cfg.n);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k)
        y[k] = rx[k] - rx[k + n];
    const auto spectrum = dft_real(y);
    return finish(read_data_bins(spectrum, cfg.n), cfg.m);
}

// --- dispatch ----------------------------------------------------------------

TxFrame modulate(std::span<const std::uint8_t> data_bits, const WaveformConfig& cfg)
{
    validate_config(cfg);
    const int bps = bits_per_symbol(cfg.m);
    if (data_bits.size() % static_cast<std::size_t>(bps) != 0)
        throw std::invalid_argument("bit count must be divisible by log2(M)");
    const auto capacity = static_cast<std::size_t>(data_subcarrier_count(cfg.kind, cfg.n));
    if (data_bits.size() > capacity * static_cast<std::size_t>(bps))
        throw std::invalid_argument("too many bits for one frame");

    std::vector<cpx> symbols = qam_map(data_bits, cfg.m);
    symbols.resize(capacity, cpx(0.0, 0.0));

    switch (cfg.kind) {
    case WaveformKind::Dco: return dco_modulate(symbols, cfg);
    case WaveformKind::Aco: return aco_modulate(symbols, cfg);
    case WaveformKind::U: return u_modulate(symbols, cfg);
    case WaveformKind::X1: return x1_modulate(symbols, cfg);
    case WaveformKind::X2: return x2_modulate(symbols, cfg);
    }
    throw std::logic_error("unreachable");
}

ModemOutput demodulate(std::span<const double> rx, const WaveformConfig& cfg)
{
    switch (cfg.kind) {
    case WaveformKind::Dco: return dco_demodulate(rx, cfg);
    case WaveformKind::Aco: return aco_demodulate(rx, cfg);
    case WaveformKind::U: return u_demodulate(rx, cfg);
    case WaveformKind::X1: return x1_demodulate(rx, cfg);
    case WaveformKind::X2: return x2_demodulate(rx, cfg);
    }
    throw std::logic_error("unreachable");
}

} // namespace owc
