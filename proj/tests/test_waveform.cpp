#include "owc/waveform.hpp"

#include "owc/channel.hpp"
#include "owc/metrics.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace owc;

namespace {

const std::vector<cpx> kData = {{-3, -1}, {-3, 1}, {-1, 3}};

bool close(const std::vector<double>& got, const std::vector<double>& want, double tol)
{
    if (got.size() != want.size())
        return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (std::abs(got[i] - want[i]) > tol)
            return false;
    return true;
}

WaveformConfig cfg_of(WaveformKind kind, int n, int m)
{
    WaveformConfig cfg;
    cfg.kind = kind;
    cfg.n = n;
    cfg.m = m;
    return cfg;
}

std::pair<std::vector<double>, std::vector<double>> split_signals(std::mt19937& gen, int n, int m)
{
    const auto frame = build_hs_spectrum(oracle::random_symbols(gen, static_cast<std::size_t>(n / 2 - 1), m),
                                         static_cast<std::size_t>(n));
    const auto [odd, even] = split_odd_even(frame);
    return {real_part(idft(odd.values)), real_part(idft(even.values))};
}

} // namespace

TEST_CASE("extract_parts reproduces the reference quarters")
{
    const std::vector<double> x_odd = {-1, -0.70710678, 1, 0, 1, 0.70710678, -1, 0};
    const std::vector<double> x_even = {-0.75, -0.25, 0.75, 0.25, -0.75, -0.25, 0.75, 0.25};
    const QuarterParts p = extract_parts(x_odd, x_even);
    CHECK(close(p.a, {0, 0, 1, 0}, 1e-12));
    CHECK(close(p.b, {1, 0.70710678, 0, 0}, 1e-12));
    CHECK(close(p.c, {0, 0, 0.75, 0.25}, 1e-12));
    CHECK(close(p.d, {0.75, 0.25, 0, 0}, 1e-12));

    const std::vector<double> zeros(8, 0.0);
    const QuarterParts z = extract_parts(zeros, zeros);
    CHECK(close(z.a, {0, 0, 0, 0}, 0.0));
    CHECK(close(z.d, {0, 0, 0, 0}, 0.0));
}

TEST_CASE("extract_parts rejects symmetry violations")
{
    std::vector<double> x_odd = {-1, -0.7, 1, 0, 1, 0.7, -1, 0};
    const std::vector<double> x_even = {-0.75, -0.25, 0.75, 0.25, -0.75, -0.25, 0.75, 0.25};
    x_odd[0] += 1e-6;
    CHECK_THROWS_AS(extract_parts(x_odd, x_even), std::invalid_argument);
    CHECK_THROWS_AS(extract_parts(x_even, x_even), std::invalid_argument);
}

TEST_CASE("parts difference re-sums to the time halves")
{
    auto gen = oracle::rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto [xo, xe] = split_signals(gen, 64, 16);
        const QuarterParts p = extract_parts(xo, xe);
        for (std::size_t k = 0; k < 32; ++k) {
            CHECK(std::abs(p.a[k] - p.b[k] - xo[k]) < 1e-12);
            CHECK(std::abs(p.c[k] - p.d[k] - xe[k]) < 1e-12);
            CHECK(p.a[k] * p.b[k] == 0.0);
            CHECK(p.c[k] * p.d[k] == 0.0);
        }
    }
}

TEST_CASE("x1_modulate matches the reference transmit frame")
{
    auto cfg = cfg_of(WaveformKind::X1, 8, 16);
    const TxFrame tx = x1_modulate(kData, cfg);
    CHECK(close(tx, {0, 0, 1.75, 0.25, 1, 0.70710678, 0.75, 0.25, 1.75, 0.95710678, 0, 0}, 1e-8));

    const std::vector<cpx> zeros(3, cpx(0, 0));
    const TxFrame ztx = x1_modulate(zeros, cfg);
    CHECK(close(ztx, std::vector<double>(12, 0.0), 0.0));

    cfg.candidate = 7;
    CHECK_THROWS_AS((void)x1_modulate(kData, cfg), std::invalid_argument);
}

TEST_CASE("every x1 candidate keeps the pair-sum identity")
{
    auto gen = oracle::rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const auto [xo, xe] = split_signals(gen, 64, 16);
        const QuarterParts p = extract_parts(xo, xe);
        for (std::size_t k = 0; k < 32; ++k) {
            const double lhs = (p.a[k] + p.c[k]) + (p.b[k] + p.d[k]);
            const double rhs = (p.b[k] + p.c[k]) + (p.a[k] + p.d[k]);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("x1 frames are non-negative with the stated length for all candidates")
{
    auto gen = oracle::rng(23);
    for (int cand = 0; cand < 4; ++cand) {
        auto cfg = cfg_of(WaveformKind::X1, 64, 16);
        cfg.candidate = cand;
        const auto data = oracle::random_symbols(gen, 31, 16);
        const TxFrame tx = x1_modulate(data, cfg);
        CHECK(tx.size() == 96);
        for (double v : tx)
            CHECK(v >= 0.0);
    }
}

TEST_CASE("x1_demix reproduces the reference receiver tables")
{
    const auto cfg = cfg_of(WaveformKind::X1, 8, 16);
    const TxFrame tx = x1_modulate(kData, cfg);
    const auto [l, r] = x1_demix(tx, cfg);
    CHECK(close(l, {-1.75, -0.95710678, 1.75, 0.25}, 1e-8));
    CHECK(close(r, {0.25, 0.45710678, -0.25, 0.25}, 1e-8));

    const ModemOutput out = x1_demodulate(tx, cfg);
    REQUIRE(out.data_symbols.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(out.data_symbols[i] - kData[i]) < 1e-9);

    CHECK_THROWS_AS((void)x1_demodulate(std::vector<double>(10, 0.0), cfg), std::invalid_argument);
}

TEST_CASE("demixed halves equal the bipolar signal halves")
{
    auto gen = oracle::rng(24);
    for (int cand = 0; cand < 4; ++cand) {
        auto cfg = cfg_of(WaveformKind::X1, 64, 16);
        cfg.candidate = cand;
        const auto data = oracle::random_symbols(gen, 31, 16);
        const auto full = real_part(idft(build_hs_spectrum(data, 64).values));
        const auto [l, r] = x1_demix(x1_modulate(data, cfg), cfg);
        for (std::size_t k = 0; k < 32; ++k) {
            CHECK(std::abs(l[k] - full[k]) < 1e-12);
            CHECK(std::abs(r[k] - full[k + 32]) < 1e-12);
        }
    }
}

TEST_CASE("x1 noiseless loopback is exact for all candidates")
{
    auto gen = oracle::rng(25);
    for (int m : {4, 16, 64}) {
        for (int cand = 0; cand < 4; ++cand) {
            auto cfg = cfg_of(WaveformKind::X1, 64, m);
            cfg.candidate = cand;
            for (int trial = 0; trial < 25; ++trial) {
                const auto data = oracle::random_symbols(gen, 31, m);
                const auto out = x1_demodulate(x1_modulate(data, cfg), cfg);
                for (std::size_t i = 0; i < data.size(); ++i)
                    CHECK(std::abs(out.data_symbols[i] - data[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("x1 all-zero receive frame demaps the zero symbol")
{
    const auto cfg = cfg_of(WaveformKind::X1, 8, 16);
    const ModemOutput out = x1_demodulate(std::vector<double>(12, 0.0), cfg);
    for (const auto& s : out.data_symbols)
        CHECK(std::abs(s) == 0.0);
    BitBlock zero_bits(4);
    qam_demap_symbol(cpx(0, 0), 16, zero_bits.data());
    for (std::size_t i = 0; i < out.bits.size(); i += 4)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(out.bits[i + j] == zero_bits[j]);
}

TEST_CASE("x2_modulate matches the reference frame and shares its head with x1")
{
    const auto cfg = cfg_of(WaveformKind::X2, 8, 16);
    const TxFrame tx = x2_modulate(kData, cfg);
    CHECK(close(tx, {0, 0, 1.75, 0.25, 1, 0.70710678, 0.75, 0.25, 0.75, 0.25, 0, 0}, 1e-8));

    const std::vector<cpx> zeros(3, cpx(0, 0));
    CHECK(close(x2_modulate(zeros, cfg), std::vector<double>(12, 0.0), 0.0));

    auto gen = oracle::rng(26);
    const auto data = oracle::random_symbols(gen, 31, 16);
    const auto x1cfg = cfg_of(WaveformKind::X1, 64, 16);
    const auto x2cfg = cfg_of(WaveformKind::X2, 64, 16);
    const TxFrame t1 = x1_modulate(data, x1cfg);
    const TxFrame t2 = x2_modulate(data, x2cfg);
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(t1[k] == t2[k]);
}

TEST_CASE("x2 receiver recovers the reference example step by step")
{
    const auto cfg = cfg_of(WaveformKind::X2, 8, 16);
    const TxFrame tx = x2_modulate(kData, cfg);
    const auto out = x2_demodulate(tx, cfg);
    REQUIRE(out.data_symbols.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(out.data_symbols[i] - kData[i]) < 1e-9);
}

TEST_CASE("x2 noiseless loopback across candidates, estimators and slicing")
{
    auto gen = oracle::rng(27);
    for (int cand = 0; cand < 2; ++cand) {
        for (CEstimator est : {CEstimator::FromA, CEstimator::FromB, CEstimator::Average}) {
            for (bool slice : {true, false}) {
                auto cfg = cfg_of(WaveformKind::X2, 64, 16);
                cfg.candidate = cand;
                cfg.c_estimator = est;
                cfg.slice_before_reconstruct = slice;
                for (int trial = 0; trial < 10; ++trial) {
                    const auto data = oracle::random_symbols(gen, 31, 16);
                    const auto out = x2_demodulate(x2_modulate(data, cfg), cfg);
                    for (std::size_t i = 0; i < data.size(); ++i)
                        CHECK(std::abs(out.data_symbols[i] - data[i]) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("x2 all-zero receive frame is all-zero without slicing")
{
    auto cfg = cfg_of(WaveformKind::X2, 8, 16);
    cfg.slice_before_reconstruct = false;
    const auto out = x2_demodulate(std::vector<double>(12, 0.0), cfg);
    for (const auto& s : out.data_symbols)
        CHECK(std::abs(s) == 0.0);
}

TEST_CASE("odd bins of the x2 head come out at half amplitude")
{
    auto gen = oracle::rng(28);
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = oracle::random_symbols(gen, 31, 16);
        const auto frame = build_hs_spectrum(data, 64);
        const auto tx = x2_modulate(data, cfg_of(WaveformKind::X2, 64, 16));
        const auto y = dft_real(std::span<const double>(tx).subspan(0, 64));
        for (std::size_t m = 1; m < 64; m += 2)
            CHECK(std::abs(y[m] - frame.values[m] / 2.0) < 1e-9);
    }
}

TEST_CASE("aco clips the reference odd frame and recovers it")
{
    const auto cfg = cfg_of(WaveformKind::Aco, 8, 16);
    const std::vector<cpx> data = {{-3, -1}, {-1, 3}};
    const TxFrame tx = aco_modulate(data, cfg);
    CHECK(close(tx, {0, 0, 1, 0, 1, 0.70710678, 0, 0}, 1e-8));

    // recovery identity checked through the direct-summation oracle
    std::vector<cpx> txc(tx.size());
    for (std::size_t i = 0; i < tx.size(); ++i)
        txc[i] = cpx(tx[i], 0.0);
    const auto y = oracle::naive_dft(txc);
    CHECK(std::abs(2.0 * y[1] - cpx(-3, -1)) < 1e-9);
    CHECK(std::abs(2.0 * y[3] - cpx(-1, 3)) < 1e-9);

    const auto out = aco_demodulate(tx, cfg);
    REQUIRE(out.data_symbols.size() == 2);
    CHECK(std::abs(out.data_symbols[0] - data[0]) < 1e-9);
    CHECK(std::abs(out.data_symbols[1] - data[1]) < 1e-9);
}

TEST_CASE("aco noiseless loopback")
{
    auto gen = oracle::rng(29);
    const auto cfg = cfg_of(WaveformKind::Aco, 64, 16);
    for (int trial = 0; trial < 100; ++trial) {
        const auto data = oracle::random_symbols(gen, 16, 16);
        const auto out = aco_demodulate(aco_modulate(data, cfg), cfg);
        for (std::size_t i = 0; i < data.size(); ++i)
            CHECK(std::abs(out.data_symbols[i] - data[i]) < 1e-9);
    }
}

TEST_CASE("unipolar frame layout and loopback")
{
    const std::vector<double> x = {-1.75, -0.96, 1.75, 0.25, 0.25, 0.46, -0.25, 0.25};
    std::vector<double> want = {0, 0, 1.75, 0.25, 0.25, 0.46, 0, 0.25, 1.75, 0.96, 0, 0, 0, 0, 0.25, 0};
    std::vector<double> frame(16);
    for (std::size_t k = 0; k < 8; ++k) {
        frame[k] = std::max(x[k], 0.0);
        frame[k + 8] = std::max(-x[k], 0.0);
    }
    CHECK(close(frame, want, 0.0));

    auto gen = oracle::rng(30);
    const auto cfg = cfg_of(WaveformKind::U, 64, 16);
    for (int trial = 0; trial < 100; ++trial) {
        const auto data = oracle::random_symbols(gen, 31, 16);
        const TxFrame tx = u_modulate(data, cfg);
        CHECK(tx.size() == 128);
        const auto out = u_demodulate(tx, cfg);
        for (std::size_t i = 0; i < data.size(); ++i)
            CHECK(std::abs(out.data_symbols[i] - data[i]) < 1e-9);
    }
}

TEST_CASE("dco with zero bias is half-wave clipping")
{
    auto gen = oracle::rng(31);
    auto cfg = cfg_of(WaveformKind::Dco, 64, 16);
    cfg.mu = 0.0;
    const auto data = oracle::random_symbols(gen, 31, 16);
    const auto x = real_part(idft(build_hs_spectrum(data, 64).values));
    const TxFrame tx = dco_modulate(data, cfg);
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(tx[k] == std::max(x[k], 0.0));

    // with clipping active the recovered symbols deviate
    const auto out = dco_demodulate(tx, cfg);
    double dev = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        dev = std::max(dev, std::abs(out.data_symbols[i] - data[i]));
    CHECK(dev > 0.1);
}

TEST_CASE("dco at a high bias level recovers exactly when nothing clips")
{
    auto gen = oracle::rng(32);
    auto cfg = cfg_of(WaveformKind::Dco, 2048, 16);
    cfg.mu = mu_for_level_db(13.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = oracle::random_symbols(gen, 1023, 16);
        const auto x = real_part(idft(build_hs_spectrum(data, 2048).values));
        double mean_sq = 0.0;
        for (double v : x)
            mean_sq += v * v / 2048.0;
        const double bias = cfg.mu * std::sqrt(mean_sq);
        double min_v = 0.0;
        for (double v : x)
            min_v = std::min(min_v, v);
        REQUIRE(min_v + bias > 0.0); // no clipping in this draw

        const auto out = dco_demodulate(dco_modulate(data, cfg), cfg);
        for (std::size_t i = 0; i < data.size(); ++i)
            CHECK(std::abs(out.data_symbols[i] - data[i]) < 1e-6);
    }
}

TEST_CASE("bit-level dispatch round-trips for every waveform")
{
    auto gen = oracle::rng(33);
    for (WaveformKind kind : {WaveformKind::Dco, WaveformKind::Aco, WaveformKind::U,
                              WaveformKind::X1, WaveformKind::X2}) {
        for (int m : {4, 64, 4096}) {
            auto cfg = cfg_of(kind, 256, m);
            if (kind == WaveformKind::Dco)
                cfg.mu = mu_for_level_db(16.0);
            const auto bits = oracle::random_bits(gen, static_cast<std::size_t>(bits_per_frame(cfg)));
            const TxFrame tx = modulate(bits, cfg);
            CHECK(tx.size() == static_cast<std::size_t>(tx_frame_length(kind, cfg.n)));
            for (double v : tx)
                CHECK(v >= 0.0);
            const auto out = demodulate(tx, cfg);
            CHECK(out.bits == bits);
        }
    }
}

TEST_CASE("dispatch zero-pads missing symbols")
{
    for (WaveformKind kind : {WaveformKind::Aco, WaveformKind::U, WaveformKind::X1, WaveformKind::X2}) {
        const auto cfg = cfg_of(kind, 64, 16);
        const TxFrame tx = modulate(BitBlock{}, cfg);
        for (double v : tx)
            CHECK(v == 0.0);
    }
    const auto cfg = cfg_of(WaveformKind::X1, 64, 16);
    CHECK_THROWS_AS((void)modulate(BitBlock(5, 0), cfg), std::invalid_argument);
    CHECK_THROWS_AS((void)modulate(BitBlock(4 * 100, 0), cfg), std::invalid_argument);
}

TEST_CASE("x1 reconstruction amplifies additive noise by 2x and 6x")
{
    auto gen = oracle::rng(34);
    auto cfg = cfg_of(WaveformKind::X1, 256, 16);
    const double sigma2 = 0.25;
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));

    double var_l = 0.0, var_r = 0.0;
    long long count = 0;
    for (int trial = 0; trial < 800; ++trial) {
        const auto data = oracle::random_symbols(gen, 127, 16);
        const TxFrame tx = x1_modulate(data, cfg);
        const auto [l0, r0] = x1_demix(tx, cfg);
        std::vector<double> rx(tx.size());
        for (std::size_t k = 0; k < tx.size(); ++k)
            rx[k] = tx[k] + noise(gen);
        const auto [l, r] = x1_demix(rx, cfg);
        for (std::size_t k = 0; k < l.size(); ++k) {
            var_l += (l[k] - l0[k]) * (l[k] - l0[k]);
            var_r += (r[k] - r0[k]) * (r[k] - r0[k]);
            ++count;
        }
    }
    var_l /= static_cast<double>(count);
    var_r /= static_cast<double>(count);
    CHECK(var_l == doctest::Approx(2.0 * sigma2).epsilon(0.1));
    CHECK(var_r == doctest::Approx(6.0 * sigma2).epsilon(0.1));
}
