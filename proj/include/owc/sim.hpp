#pragma once

// Monte Carlo link engine: BER points, required-ratio bisection searches,
// PAPR CCDF collection and multi-waveform sweeps.
//
// Symbol s always draws its payload bits from stream (master_seed, 2s) and
// its channel noise from stream (master_seed, 2s+1), so the parallel and
// serial execution paths produce bit-identical results and every noise
// level of a search reuses the same underlying random numbers.

#include "owc/channel.hpp"
#include "owc/metrics.hpp"
#include "owc/waveform.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace owc {

enum class NoiseMode { DependentOnly, IndependentOnly, Mixed };

struct SimPlan {
    WaveformConfig waveform;
    NoiseMode noise_mode = NoiseMode::IndependentOnly;
    // Mixed mode pins the additive noise at E(X^2)/sigma2 = mixed_exs_db,
    // with E(X^2) taken from a 50-symbol calibration run.
    double mixed_exs_db = 40.0;
    int num_symbols = 200;
    RngSeed master_seed{1, 0};
};

// Parallel runs the symbol loop under OpenMP; Serial is the reference
// implementation kept for testing and benchmarking. Results are identical.
enum class Exec { Serial, Parallel };

struct BerPoint {
    BerRecord ber;
    PowerStats stats;
};

/// Simulate num_symbols frames at a fixed noise configuration.
BerPoint run_ber_point(const SimPlan& plan, const NoiseConfig& noise, Exec exec = Exec::Parallel);

/// Transmitted-frame power statistics of the plan's symbol stream
/// (no channel), over `symbols` frames.
PowerStats measure_power(const SimPlan& plan, int symbols, Exec exec = Exec::Parallel);

enum class EbMetric { ElecXi, OptXi, ElecSigma, OptSigma };

const char* eb_metric_name(EbMetric metric);
PowerMode eb_metric_power_mode(EbMetric metric);

struct RequiredResult {
    bool reachable = false;
    double required_db = 0.0;  // Eb ratio at the BER crossing
    double noise_var = 0.0;    // swept variance at the crossing
    double achieved_ber = 0.0; // measured at the crossing
    long long bits_per_point = 0;
    int symbols_used = 0;
    PowerStats stats;
    std::string diagnostic; // non-empty when unreachable or aborted

    // optional warm start for the bracketing walk
    std::optional<double> initial_var;
};

/// Bisect the swept noise variance (xi2 for *Xi metrics, sigma2 for *Sigma
/// metrics) until the measured BER crosses target_ber, to a bracket width
/// of 0.1 dB, then report the Eb ratio at the crossing. Unreachable
/// targets (e.g. clipping- or mixed-noise-floor limited) are flagged.
RequiredResult find_required_ratio(const SimPlan& plan, double target_ber, EbMetric metric,
                                   Exec exec = Exec::Parallel,
                                   std::optional<double> initial_var = std::nullopt);

/// PAPR samples of the plan's transmitted frames, in frame order. The
/// unipolar waveform is measured per N-sample block (two samples per 2N
/// frame) so its peak statistics stay comparable with the N-sample
/// baselines; all other waveforms contribute one sample per frame.
std::vector<double> collect_papr_samples(const SimPlan& plan, Exec exec = Exec::Parallel);

/// PAPR CCDF over the plan's transmitted frames.
CcdfCurve run_papr_ccdf(const SimPlan& plan, std::span<const double> thresholds_db,
                        Exec exec = Exec::Parallel);

/// PAPR CCDF over frames from an arbitrary source (test hook).
CcdfCurve run_papr_ccdf(const std::function<TxFrame(int)>& frame_source, int num_frames,
                        std::span<const double> thresholds_db);

struct SweepRow {
    WaveformKind kind = WaveformKind::Dco;
    int m = 4;
    double bias_db = 0.0; // dco only; 0 otherwise
    int candidate = 0;
    double normalized_bit_rate = 0.0;
    EbMetric metric = EbMetric::ElecSigma;
    bool reachable = false;
    double required_db = 0.0;
    double achieved_ber = 0.0;
    int symbols_used = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;          // one per (waveform, M), dco minimized over bias
    std::vector<SweepRow> dco_bias_rows; // every dco bias level before minimization
};

/// Evaluate every plan; dco plans are expanded over dco_bias_grid_db and
/// the bias with the smallest required ratio is kept.
SweepResult run_sweep(std::span<const SimPlan> plans, double target_ber, EbMetric metric,
                      std::span<const double> dco_bias_grid_db, Exec exec = Exec::Parallel);

} // namespace owc
