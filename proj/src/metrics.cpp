#include "owc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace owc {

void PowerStats::add(std::span<const double> frame)
{
    for (double v : frame) {
        sum_sq += v * v;
        sum_abs += std::abs(v);
    }
    sample_count += static_cast<long long>(frame.size());
}

void PowerStats::merge(const PowerStats& other)
{
    sum_sq += other.sum_sq;
    sum_abs += other.sum_abs;
    sample_count += other.sample_count;
}

double PowerStats::mean_sq() const
{
    return sample_count == 0 ? 0.0 : sum_sq / static_cast<double>(sample_count);
}

double PowerStats::mean_abs() const
{
    return sample_count == 0 ? 0.0 : sum_abs / static_cast<double>(sample_count);
}

PowerStats power_stats(std::span<const std::vector<double>> frames)
{
    PowerStats stats;
    for (const auto& f : frames)
        stats.add(f);
    return stats;
}

double papr_db(std::span<const double> frame)
{
    if (frame.empty())
        throw std::domain_error("papr undefined for an empty frame");
    double peak = 0.0;
    double sum = 0.0;
    for (double v : frame) {
        peak = std::max(peak, v * v);
        sum += v * v;
    }
    if (sum == 0.0)
        throw std::domain_error("papr undefined for an all-zero frame");
    return 10.0 * std::log10(peak / (sum / static_cast<double>(frame.size())));
}

CcdfCurve ccdf(std::span<const double> papr_samples, std::span<const double> thresholds_db)
{
    if (papr_samples.empty())
        throw std::invalid_argument("ccdf requires at least one sample");
    CcdfCurve curve;
    curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
    curve.probabilities.resize(thresholds_db.size());
    for (std::size_t i = 0; i < thresholds_db.size(); ++i) {
        std::size_t above = 0;
        for (double s : papr_samples)
            if (s > thresholds_db[i])
                ++above;
        curve.probabilities[i] = static_cast<double>(above) / static_cast<double>(papr_samples.size());
    }
    return curve;
}

double spectral_efficiency(WaveformKind kind)
{
    switch (kind) {
    case WaveformKind::Dco: return 1.0 / 2.0;
    case WaveformKind::Aco:
    case WaveformKind::U: return 1.0 / 4.0;
    case WaveformKind::X1:
    case WaveformKind::X2: return 1.0 / 3.0;
    }
    return 0.0;
}

double bits_per_sample(WaveformKind kind, int m)
{
    return spectral_efficiency(kind) * bits_per_symbol(m);
}

double eb_ratio_db(const PowerStats& stats, double noise_var, double b_s, PowerMode mode)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("noise variance must be positive");
    if (!(b_s > 0.0))
        throw std::invalid_argument("bits per sample must be positive");
    const double power = mode == PowerMode::Elec ? stats.mean_sq() : stats.mean_abs();
    return 10.0 * std::log10(power / (noise_var * b_s));
}

double dc_bias_level_db(double mu)
{
    return 10.0 * std::log10(mu * mu + 1.0);
}

double mu_for_level_db(double level_db)
{
    if (level_db < 0.0)
        throw std::invalid_argument("bias level must be >= 0 dB");
    return std::sqrt(std::pow(10.0, level_db / 10.0) - 1.0);
}

BerRecord count_bit_errors(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits)
{
    if (tx_bits.size() != rx_bits.size())
        throw std::invalid_argument("bit blocks differ in length");
    BerRecord rec;
    rec.bits_total = static_cast<long long>(tx_bits.size());
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        rec.bit_errors += (tx_bits[i] ^ rx_bits[i]) & 1;
    return rec;
}

} // namespace owc
