#pragma once

// PAPR and its CCDF, frame power statistics, the per-bit power ratios,
// DC-bias level conversions and bit-error bookkeeping.

#include "owc/waveform.hpp"

#include <span>
#include <vector>

namespace owc {

struct PowerStats {
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    long long sample_count = 0;

    void add(std::span<const double> frame);
    void merge(const PowerStats& other);

    double mean_sq() const;  // E(X^2), electrical power per sample
    double mean_abs() const; // E(X), optical power per sample
};

PowerStats power_stats(std::span<const std::vector<double>> frames);

struct CcdfCurve {
    std::vector<double> thresholds_db;
    std::vector<double> probabilities;
};

/// Peak-to-average power ratio in dB, 10*log10(max(x^2)/mean(x^2)).
/// Throws std::domain_error for an empty or all-zero frame.
double papr_db(std::span<const double> frame);

/// Fraction of samples strictly greater than each threshold.
CcdfCurve ccdf(std::span<const double> papr_samples, std::span<const double> thresholds_db);

/// Asymptotic spectral efficiency: 1/2 dco, 1/4 aco and u, 1/3 x1 and x2.
double spectral_efficiency(WaveformKind kind);

/// Bits per transmitted time sample, spectral_efficiency * log2(M). Also
/// the normalized bit rate in bits/s/Hz.
double bits_per_sample(WaveformKind kind, int m);

enum class PowerMode { Elec, Opt };

/// Per-bit power to noise-variance ratio in dB:
/// 10*log10(E(X^2)/(var*b_s)) electrical, 10*log10(E(X)/(var*b_s)) optical.
double eb_ratio_db(const PowerStats& stats, double noise_var, double b_s, PowerMode mode);

/// DC bias level in dB for a bias of mu standard deviations,
/// 10*log10(mu^2 + 1), and its inverse.
double dc_bias_level_db(double mu);
double mu_for_level_db(double level_db);

struct BerRecord {
    long long bit_errors = 0;
    long long bits_total = 0;

    double ber() const { return bits_total == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits_total); }
    void merge(const BerRecord& other)
    {
        bit_errors += other.bit_errors;
        bits_total += other.bits_total;
    }
};

/// Hamming distance between two equal-length bit blocks.
BerRecord count_bit_errors(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

} // namespace owc
