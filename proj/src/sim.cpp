#include "owc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace owc {

namespace {

struct SymbolOutcome {
    long long bit_errors = 0;
    long long bits = 0;
    PowerStats stats;
};

NoiseConfig noise_from_variance(const SimPlan& plan, double swept_var, double fixed_sigma2)
{
    switch (plan.noise_mode) {
    case NoiseMode::DependentOnly: return {swept_var, 0.0};
    case NoiseMode::IndependentOnly: return {0.0, swept_var};
    case NoiseMode::Mixed: return {swept_var, fixed_sigma2};
    }
    return {};
}

SymbolOutcome simulate_symbol(const SimPlan& plan, const NoiseConfig& noise, int s)
{
    const auto& cfg = plan.waveform;
    const auto stream = static_cast<std::uint64_t>(s);
    RngStream bit_source(plan.master_seed.with_stream(2 * stream));
    const BitBlock tx_bits = bit_source.bits(static_cast<std::size_t>(bits_per_frame(cfg)));

    const TxFrame tx = modulate(tx_bits, cfg);
    const auto rx = apply_channel(tx, noise, plan.master_seed.with_stream(2 * stream + 1));
    const ModemOutput out = demodulate(rx, cfg);

    SymbolOutcome res;
    const BerRecord rec = count_bit_errors(tx_bits, out.bits);
    res.bit_errors = rec.bit_errors;
    res.bits = rec.bits_total;
    res.stats.add(tx);
    return res;
}

// Runs fn(s) for s in [0, n) and collects results in symbol order, so the
// reduction is identical whichever execution policy ran the loop.
template <typename Fn>
std::vector<SymbolOutcome> for_each_symbol(int n, Exec exec, Fn&& fn)
{
    std::vector<SymbolOutcome> out(static_cast<std::size_t>(n));
    if (exec == Exec::Serial) {
        for (int s = 0; s < n; ++s)
            out[static_cast<std::size_t>(s)] = fn(s);
        return out;
    }
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n; ++s)
        out[static_cast<std::size_t>(s)] = fn(s);
    return out;
}

BerPoint reduce(const std::vector<SymbolOutcome>& outcomes)
{
    BerPoint point;
    for (const auto& o : outcomes) {
        point.ber.bit_errors += o.bit_errors;
        point.ber.bits_total += o.bits;
        point.stats.merge(o.stats);
    }
    return point;
}

} // namespace

BerPoint run_ber_point(const SimPlan& plan, const NoiseConfig& noise, Exec exec)
{
    validate_config(plan.waveform);
    if (plan.num_symbols < 1)
        throw std::invalid_argument("num_symbols must be >= 1");
    return reduce(for_each_symbol(plan.num_symbols, exec,
                                  [&](int s) { return simulate_symbol(plan, noise, s); }));
}

PowerStats measure_power(const SimPlan& plan, int symbols, Exec exec)
{
    validate_config(plan.waveform);
    const auto outcomes = for_each_symbol(symbols, exec, [&](int s) {
        const auto stream = static_cast<std::uint64_t>(s);
        RngStream bit_source(plan.master_seed.with_stream(2 * stream));
        const BitBlock bits = bit_source.bits(static_cast<std::size_t>(bits_per_frame(plan.waveform)));
        SymbolOutcome res;
        res.stats.add(modulate(bits, plan.waveform));
        return res;
    });
    return reduce(outcomes).stats;
}

const char* eb_metric_name(EbMetric metric)
{
    switch (metric) {
    case EbMetric::ElecXi: return "eb_elec_over_xi2";
    case EbMetric::OptXi: return "eb_opt_over_xi2";
    case EbMetric::ElecSigma: return "eb_elec_over_sigma2";
    case EbMetric::OptSigma: return "eb_opt_over_sigma2";
    }
    return "?";
}

PowerMode eb_metric_power_mode(EbMetric metric)
{
    return (metric == EbMetric::ElecXi || metric == EbMetric::ElecSigma) ? PowerMode::Elec
                                                                         : PowerMode::Opt;
}

namespace {

bool metric_sweeps_xi(EbMetric metric)
{
    return metric == EbMetric::ElecXi || metric == EbMetric::OptXi;
}

void check_metric_mode(const SimPlan& plan, EbMetric metric)
{
    const bool xi = metric_sweeps_xi(metric);
    if (xi && plan.noise_mode == NoiseMode::IndependentOnly)
        throw std::invalid_argument("xi-denominated metric requires dependent or mixed noise");
    if (!xi && plan.noise_mode != NoiseMode::IndependentOnly)
        throw std::invalid_argument("sigma-denominated metric requires independent-only noise");
}

// Allowance for Monte Carlo jitter when checking that BER grows with the
// noise variance: treat a drop larger than 6 sigma of the error count as a
// genuine non-monotonicity.
bool drops_beyond_jitter(long long errors_low_var, long long errors_high_var)
{
    const double slack = 6.0 * std::sqrt(static_cast<double>(std::max(errors_low_var, errors_high_var)) + 9.0);
    return static_cast<double>(errors_high_var) + slack < static_cast<double>(errors_low_var);
}

} // namespace

RequiredResult find_required_ratio(const SimPlan& plan, double target_ber, EbMetric metric, Exec exec,
                                   std::optional<double> initial_var)
{
    validate_config(plan.waveform);
    check_metric_mode(plan, metric);
    if (!(target_ber > 0.0 && target_ber < 0.5))
        throw std::invalid_argument("target BER must be in (0, 0.5)");

    RequiredResult result;

    // Grow the symbol count until a point carries at least 100/target bits,
    // i.e. at least 100 expected errors at the target.
    const auto frame_bits = static_cast<long long>(bits_per_frame(plan.waveform));
    const auto min_bits = static_cast<long long>(std::ceil(100.0 / target_ber));
    SimPlan work = plan;
    work.num_symbols = static_cast<int>(
        std::max<long long>(plan.num_symbols, (min_bits + frame_bits - 1) / frame_bits));
    result.symbols_used = work.num_symbols;
    result.bits_per_point = static_cast<long long>(work.num_symbols) * frame_bits;

    double fixed_sigma2 = 0.0;
    if (work.noise_mode == NoiseMode::Mixed) {
        SimPlan calib = work;
        calib.num_symbols = 50;
        const PowerStats cal = measure_power(calib, calib.num_symbols, exec);
        fixed_sigma2 = cal.mean_sq() / std::pow(10.0, work.mixed_exs_db / 10.0);
    }

    std::map<double, BerPoint> cache;
    const auto evaluate = [&](double var) -> const BerPoint& {
        auto it = cache.find(var);
        if (it == cache.end())
            it = cache.emplace(var, run_ber_point(work, noise_from_variance(work, var, fixed_sigma2), exec)).first;
        result.stats = it->second.stats;
        return it->second;
    };

    // Signal-power-based starting point (roughly Eb = 25 dB).
    double var0 = initial_var.value_or(0.0);
    if (!(var0 > 0.0)) {
        const PowerStats probe = measure_power(work, std::min(work.num_symbols, 20), exec);
        const double power = eb_metric_power_mode(metric) == PowerMode::Elec ? probe.mean_sq() : probe.mean_abs();
        var0 = power / (bits_per_sample(work.waveform.kind, work.waveform.m) * std::pow(10.0, 2.5));
    }

    constexpr int kMaxWalk = 120;
    double lo = var0, hi = var0;
    long long lo_err = evaluate(var0).ber.bit_errors;
    long long hi_err = lo_err;
    const auto target_err = static_cast<long long>(std::floor(target_ber * static_cast<double>(result.bits_per_point)));

    if (lo_err > target_err) {
        // Walk down until the target is undercut; a stable error count on a
        // near-zero variance means an error floor the target cannot beat.
        int plateau = 0;
        for (int step = 0;; ++step) {
            if (step >= kMaxWalk || plateau >= 3) {
                result.diagnostic = "BER floor " + std::to_string(evaluate(lo).ber.ber())
                                    + " above target at negligible swept noise";
                return result;
            }
            const double next = lo / 2.0;
            const long long err = evaluate(next).ber.bit_errors;
            if (drops_beyond_jitter(err, lo_err)) {
                result.diagnostic = "non-monotone BER while bracketing down";
                return result;
            }
            plateau = (err == lo_err) ? plateau + 1 : 0;
            hi = lo;
            hi_err = lo_err;
            lo = next;
            lo_err = err;
            if (lo_err <= target_err)
                break;
        }
    } else {
        // Walk up until the target is exceeded.
        for (int step = 0;; ++step) {
            if (step >= kMaxWalk) {
                result.diagnostic = "BER stayed below target while raising noise";
                return result;
            }
            const double next = hi * 2.0;
            const long long err = evaluate(next).ber.bit_errors;
            if (drops_beyond_jitter(hi_err, err)) {
                result.diagnostic = "non-monotone BER while bracketing up";
                return result;
            }
            lo = hi;
            lo_err = hi_err;
            hi = next;
            hi_err = err;
            if (hi_err > target_err)
                break;
        }
    }

    // Bisect in log variance until the bracket is narrower than 0.1 dB.
    const double width_limit = std::pow(10.0, 0.01);
    while (hi / lo > width_limit) {
        const double mid = std::sqrt(lo * hi);
        const long long err = evaluate(mid).ber.bit_errors;
        if (err > target_err) {
            hi = mid;
            hi_err = err;
        } else {
            lo = mid;
            lo_err = err;
        }
    }

    // Crossing inside the final bracket, log-log interpolated when possible.
    double crossing = std::sqrt(lo * hi);
    const double ber_lo = static_cast<double>(lo_err) / static_cast<double>(result.bits_per_point);
    const double ber_hi = static_cast<double>(hi_err) / static_cast<double>(result.bits_per_point);
    if (lo_err > 0 && hi_err > lo_err) {
        const double t = (std::log(target_ber) - std::log(ber_lo)) / (std::log(ber_hi) - std::log(ber_lo));
        crossing = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    }

    const BerPoint& at_crossing = evaluate(crossing);
    result.reachable = true;
    result.noise_var = crossing;
    result.achieved_ber = at_crossing.ber.ber();
    result.required_db = eb_ratio_db(at_crossing.stats, crossing,
                                     bits_per_sample(work.waveform.kind, work.waveform.m),
                                     eb_metric_power_mode(metric));
    return result;
}

namespace {

void papr_block_samples(const WaveformConfig& cfg, const TxFrame& frame, std::vector<double>& out)
{
    const auto block = cfg.kind == WaveformKind::U ? static_cast<std::size_t>(cfg.n) : frame.size();
    for (std::size_t base = 0; base < frame.size(); base += block) {
        const std::span<const double> view(frame.data() + base, block);
        bool nonzero = false;
        for (double v : view)
            nonzero = nonzero || v != 0.0;
        if (nonzero)
            out.push_back(papr_db(view));
    }
}

} // namespace

std::vector<double> collect_papr_samples(const SimPlan& plan, Exec exec)
{
    validate_config(plan.waveform);
    const int n = plan.num_symbols;
    std::vector<std::vector<double>> per_symbol(static_cast<std::size_t>(n));
    const auto compute = [&](int s) {
        RngStream bit_source(plan.master_seed.with_stream(2 * static_cast<std::uint64_t>(s)));
        const BitBlock bits = bit_source.bits(static_cast<std::size_t>(bits_per_frame(plan.waveform)));
        papr_block_samples(plan.waveform, modulate(bits, plan.waveform), per_symbol[static_cast<std::size_t>(s)]);
    };
    if (exec == Exec::Serial) {
        for (int s = 0; s < n; ++s)
            compute(s);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (int s = 0; s < n; ++s)
            compute(s);
    }
    std::vector<double> samples;
    for (const auto& group : per_symbol)
        samples.insert(samples.end(), group.begin(), group.end());
    return samples;
}

CcdfCurve run_papr_ccdf(const SimPlan& plan, std::span<const double> thresholds_db, Exec exec)
{
    return ccdf(collect_papr_samples(plan, exec), thresholds_db);
}

CcdfCurve run_papr_ccdf(const std::function<TxFrame(int)>& frame_source, int num_frames,
                        std::span<const double> thresholds_db)
{
    std::vector<double> samples(static_cast<std::size_t>(num_frames));
    for (int s = 0; s < num_frames; ++s)
        samples[static_cast<std::size_t>(s)] = papr_db(frame_source(s));
    return ccdf(samples, thresholds_db);
}

SweepResult run_sweep(std::span<const SimPlan> plans, double target_ber, EbMetric metric,
                      std::span<const double> dco_bias_grid_db, Exec exec)
{
    SweepResult result;
    for (const SimPlan& plan : plans) {
        const auto kind = plan.waveform.kind;
        SweepRow row;
        row.kind = kind;
        row.m = plan.waveform.m;
        row.candidate = plan.waveform.candidate;
        row.normalized_bit_rate = bits_per_sample(kind, plan.waveform.m);
        row.metric = metric;

        if (kind == WaveformKind::Dco) {
            if (dco_bias_grid_db.empty())
                throw std::invalid_argument("dco plan requires a bias grid");
            bool have_best = false;
            SweepRow best = row;
            std::optional<double> warm;
            for (double bias_db : dco_bias_grid_db) {
                SimPlan biased = plan;
                biased.waveform.mu = mu_for_level_db(bias_db);
                const RequiredResult r = find_required_ratio(biased, target_ber, metric, exec, warm);
                SweepRow bias_row = row;
                bias_row.bias_db = bias_db;
                bias_row.reachable = r.reachable;
                bias_row.required_db = r.required_db;
                bias_row.achieved_ber = r.achieved_ber;
                bias_row.symbols_used = r.symbols_used;
                result.dco_bias_rows.push_back(bias_row);
                if (r.reachable) {
                    warm = r.noise_var;
                    if (!have_best || bias_row.required_db < best.required_db) {
                        best = bias_row;
                        have_best = true;
                    }
                }
            }
            best.reachable = have_best;
            result.rows.push_back(best);
        } else {
            const RequiredResult r = find_required_ratio(plan, target_ber, metric, exec);
            row.reachable = r.reachable;
            row.required_db = r.required_db;
            row.achieved_ber = r.achieved_ber;
            row.symbols_used = r.symbols_used;
            result.rows.push_back(row);
        }
    }
    return result;
}

} // namespace owc
