#pragma once

// The five modulator/demodulator pairs behind one modem interface:
// two mixed waveforms (x1 non-successive, x2 successive) plus the
// dc-biased, asymmetrically-clipped and unipolar baselines. Every
// transmitted frame is real and non-negative.

#include "owc/spectral.hpp"

#include <array>
#include <span>
#include <vector>

namespace owc {

using TimeFrame = std::vector<double>;
using TxFrame = std::vector<double>;

enum class WaveformKind { Dco, Aco, U, X1, X2 };

enum class CEstimator { FromA, FromB, Average };

struct WaveformConfig {
    WaveformKind kind = WaveformKind::Dco;
    int n = 1024; // subcarrier count, power of two >= 8
    int m = 16;   // constellation order

    // dco only: bias multiplier, DC = mu * sqrt(mean(x^2)) per frame
    double mu = 0.0;
    // x1: 0..3, x2: 0..1 -- which block triple is transmitted; carried
    // out of band (the receiver is configured with the same value)
    int candidate = 0;
    // x2 receiver options
    CEstimator c_estimator = CEstimator::Average;
    bool slice_before_reconstruct = true;
};

/// Throws std::invalid_argument on any out-of-range field.
void validate_config(const WaveformConfig& cfg);

/// Data symbols carried per frame: N/2-1 for dco/u/x1/x2, N/4 for aco.
int data_subcarrier_count(WaveformKind kind, int n);

/// Transmitted samples per frame: 3N/2 (x1/x2), N (dco/aco), 2N (u).
int tx_frame_length(WaveformKind kind, int n);

int bits_per_frame(const WaveformConfig& cfg);

// The four non-negative N/2-point sequences extracted from the first
// halves of the odd-bin (antisymmetric) and even-bin (symmetric) time
// signals: a - b reproduces the odd half, c - d the even half, and
// a.b == c.d == 0 element-wise.
struct QuarterParts {
    std::vector<double> a, b, c, d;
};

/// Extract the parts, validating antisymmetry of x_odd and symmetry of
/// x_even to `tol` (absolute).
QuarterParts extract_parts(std::span<const double> x_odd, std::span<const double> x_even,
                           double tol = 1e-9);

struct ModemOutput {
    std::vector<cpx> data_symbols;
    BitBlock bits;
};

// Per-waveform symbol-level entry points.
TxFrame x1_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg);
ModemOutput x1_demodulate(std::span<const double> rx, const WaveformConfig& cfg);
TxFrame x2_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg);
ModemOutput x2_demodulate(std::span<const double> rx, const WaveformConfig& cfg);
TxFrame dco_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg);
ModemOutput dco_demodulate(std::span<const double> rx, const WaveformConfig& cfg);
TxFrame aco_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg);
ModemOutput aco_demodulate(std::span<const double> rx, const WaveformConfig& cfg);
TxFrame u_modulate(std::span<const cpx> data_symbols, const WaveformConfig& cfg);
ModemOutput u_demodulate(std::span<const double> rx, const WaveformConfig& cfg);

/// x1 de-mixer: reconstruct the missing block pair sum and return the two
/// halves (l, r) of the bipolar N-point signal. Exposed for tests and for
/// noise-propagation measurements.
std::pair<std::vector<double>, std::vector<double>>
x1_demix(std::span<const double> rx, const WaveformConfig& cfg);

// Bit-level dispatch over WaveformConfig::kind. modulate() accepts up to
// bits_per_frame(cfg) bits (whole symbols only) and zero-pads the unused
// subcarriers; demodulate() always emits bits for every data subcarrier.
TxFrame modulate(std::span<const std::uint8_t> data_bits, const WaveformConfig& cfg);
ModemOutput demodulate(std::span<const double> rx, const WaveformConfig& cfg);

const char* waveform_name(WaveformKind kind);

} // namespace owc
