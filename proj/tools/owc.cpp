// owc: command-line front end for the optical-wireless waveform simulator.
//
// Subcommands: golden (known-answer verification), papr (CCDF curves),
// ber (BER vs per-bit ratio), required (ratio at a target BER) and sweep
// (waveform x constellation comparison with DC-bias optimization).
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error.

#include "owc/io.hpp"
#include "owc/kat.hpp"
#include "owc/sim.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace owc;

struct CommonOpts {
    std::string waveform = "x1";
    double mu_db = 7.0;
    int candidate = 0;
    std::string c_estimator = "avg";
    std::string slice = "on";
    int n = 1024;
    int m = 16;
    std::string noise = "indep";
    int symbols = 200;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    bool paper_scale = false;
    bool verbose = false;

    CLI::Option* n_opt = nullptr;
    CLI::Option* symbols_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o)
{
    cmd->add_option("--waveform", o.waveform, "waveform kind")
        ->check(CLI::IsMember({"dco", "aco", "u", "x1", "x2"}));
    cmd->add_option("--mu-db", o.mu_db, "dco bias level in dB")->check(CLI::NonNegativeNumber);
    cmd->add_option("--candidate", o.candidate, "mixed-waveform candidate index");
    cmd->add_option("--c-estimator", o.c_estimator, "x2 leftover-part estimator")
        ->check(CLI::IsMember({"a", "b", "avg"}));
    cmd->add_option("--slice", o.slice, "x2: hard-slice before reconstruction")
        ->check(CLI::IsMember({"on", "off"}));
    o.n_opt = cmd->add_option("--n", o.n, "subcarrier count (power of two)");
    cmd->add_option("--m", o.m, "constellation order")
        ->check(CLI::IsMember({"4", "16", "64", "256", "1024", "4096"}));
    cmd->add_option("--noise", o.noise, "noise scenario")
        ->check(CLI::IsMember({"dep", "indep", "mixed40"}));
    o.symbols_opt = cmd->add_option("--symbols", o.symbols, "frames per point");
    cmd->add_option("--seed", o.seed, "master random seed");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--paper-scale", o.paper_scale, "2000 frames x 2048 subcarriers");
    cmd->add_flag("--verbose,-v", o.verbose, "extra rows / progress output");
}

WaveformKind kind_of(const std::string& name)
{
    if (name == "dco") return WaveformKind::Dco;
    if (name == "aco") return WaveformKind::Aco;
    if (name == "u") return WaveformKind::U;
    if (name == "x1") return WaveformKind::X1;
    return WaveformKind::X2;
}

SimPlan plan_of(const CommonOpts& o)
{
    SimPlan plan;
    plan.waveform.kind = kind_of(o.waveform);
    plan.waveform.n = o.n;
    plan.waveform.m = o.m;
    plan.waveform.mu = mu_for_level_db(o.mu_db);
    plan.waveform.candidate = o.candidate;
    plan.waveform.c_estimator = o.c_estimator == "a"   ? CEstimator::FromA
                                : o.c_estimator == "b" ? CEstimator::FromB
                                                       : CEstimator::Average;
    plan.waveform.slice_before_reconstruct = o.slice == "on";
    plan.noise_mode = o.noise == "dep"     ? NoiseMode::DependentOnly
                      : o.noise == "indep" ? NoiseMode::IndependentOnly
                                           : NoiseMode::Mixed;
    plan.mixed_exs_db = 40.0;
    plan.num_symbols = o.symbols;
    plan.master_seed = {o.seed, 0};

    if (o.paper_scale) {
        if (o.n_opt && o.n_opt->count() == 0)
            plan.waveform.n = 2048;
        if (o.symbols_opt && o.symbols_opt->count() == 0)
            plan.num_symbols = 2000;
    }
    return plan;
}

EbMetric metric_of(const SimPlan& plan, const std::string& power)
{
    const bool elec = power == "elec";
    if (plan.noise_mode == NoiseMode::IndependentOnly)
        return elec ? EbMetric::ElecSigma : EbMetric::OptSigma;
    return elec ? EbMetric::ElecXi : EbMetric::OptXi;
}

void emit(const CommonOpts& o, const Table& table)
{
    write_output(o.out, o.format == "json" ? to_json(table) : to_csv(table));
}

// --- golden ------------------------------------------------------------------

int cmd_golden(double tolerance, const std::string& perturb)
{
    const KatReport report = run_known_answer_checks(tolerance, perturb);
    for (const auto& t : report.tables) {
        if (t.pass) {
            std::printf("PASS %-26s (max err %.2e)\n", t.table.c_str(), t.max_err);
        } else {
            std::printf("FAIL %-26s entry %d: got (%.6g, %.6g) want (%.6g, %.6g) tol %.3g\n",
                        t.table.c_str(), t.first_bad, t.got.real(), t.got.imag(),
                        t.want.real(), t.want.imag(), tolerance);
        }
    }
    std::printf("%s: %zu tables\n", report.all_pass ? "OK" : "MISMATCH", report.tables.size());
    return report.all_pass ? 0 : 1;
}

// --- papr --------------------------------------------------------------------

int cmd_papr(const CommonOpts& o, const std::vector<std::string>& waveforms,
             const std::vector<double>& mu_levels, double t_min, double t_max, double t_step)
{
    std::vector<double> thresholds;
    for (double t = t_min; t <= t_max + 1e-9; t += t_step)
        thresholds.push_back(t);

    struct Entry {
        std::string name;
        double bias_db;
    };
    std::vector<Entry> entries;
    for (const auto& w : waveforms) {
        if (w == "dco") {
            for (double level : mu_levels)
                entries.push_back({w, level});
        } else {
            entries.push_back({w, 0.0});
        }
    }

    Table table;
    table.columns = {"waveform", "bias_db", "threshold_db", "ccdf"};
    for (const auto& e : entries) {
        CommonOpts eo = o;
        eo.waveform = e.name;
        eo.mu_db = e.bias_db;
        const SimPlan plan = plan_of(eo);
        const CcdfCurve curve = run_papr_ccdf(plan, thresholds);
        for (std::size_t i = 0; i < curve.thresholds_db.size(); ++i)
            table.add_row({e.name, e.bias_db, curve.thresholds_db[i], curve.probabilities[i]});
    }
    emit(o, table);
    return 0;
}

// --- ber ---------------------------------------------------------------------

int cmd_ber(const CommonOpts& o, const std::string& power, double eb_min, double eb_max, double eb_step)
{
    const SimPlan plan = plan_of(o);
    const EbMetric metric = metric_of(plan, power);

    SimPlan calib = plan;
    calib.num_symbols = 50;
    const PowerStats cal = measure_power(calib, calib.num_symbols);
    const double p = eb_metric_power_mode(metric) == PowerMode::Elec ? cal.mean_sq() : cal.mean_abs();
    const double b_s = bits_per_sample(plan.waveform.kind, plan.waveform.m);
    const double fixed_sigma2 = plan.noise_mode == NoiseMode::Mixed
                                    ? cal.mean_sq() / std::pow(10.0, plan.mixed_exs_db / 10.0)
                                    : 0.0;

    Table table;
    table.columns = {"eb_db", "ber", "errors", "bits"};
    for (double eb = eb_min; eb <= eb_max + 1e-9; eb += eb_step) {
        const double swept = p / (b_s * std::pow(10.0, eb / 10.0));
        NoiseConfig noise;
        switch (plan.noise_mode) {
        case NoiseMode::DependentOnly: noise = {swept, 0.0}; break;
        case NoiseMode::IndependentOnly: noise = {0.0, swept}; break;
        case NoiseMode::Mixed: noise = {swept, fixed_sigma2}; break;
        }
        const BerPoint point = run_ber_point(plan, noise);
        table.add_row({eb, point.ber.ber(), point.ber.bit_errors, point.ber.bits_total});
        if (o.verbose)
            std::fprintf(stderr, "eb %.2f dB -> ber %.3e\n", eb, point.ber.ber());
    }
    emit(o, table);
    return 0;
}

// --- required ------------------------------------------------------------------

int cmd_required(const CommonOpts& o, const std::string& power, double target_ber)
{
    const SimPlan plan = plan_of(o);
    const EbMetric metric = metric_of(plan, power);
    const RequiredResult r = find_required_ratio(plan, target_ber, metric);

    Table table;
    table.columns = {"waveform", "m", "bias_db", "candidate", "metric", "target_ber",
                     "required_db", "achieved_ber", "reachable", "symbols", "note"};
    table.add_row({std::string(waveform_name(plan.waveform.kind)),
                   static_cast<long long>(plan.waveform.m),
                   plan.waveform.kind == WaveformKind::Dco ? Cell(o.mu_db) : Cell(std::string()),
                   static_cast<long long>(plan.waveform.candidate),
                   std::string(eb_metric_name(metric)),
                   target_ber,
                   r.reachable ? Cell(r.required_db) : Cell(std::string()),
                   r.achieved_ber,
                   static_cast<long long>(r.reachable ? 1 : 0),
                   static_cast<long long>(r.symbols_used),
                   r.diagnostic});
    emit(o, table);
    return 0;
}

// --- sweep ---------------------------------------------------------------------

int cmd_sweep(const CommonOpts& o, const std::string& power, double target_ber,
              const std::vector<double>& bias_grid, std::vector<int> m_list)
{
    const SimPlan base = plan_of(o);
    const EbMetric metric = metric_of(base, power);

    std::vector<SimPlan> plans;
    for (const char* w : {"dco", "aco", "u", "x1", "x2"}) {
        for (int m : m_list) {
            CommonOpts po = o;
            po.waveform = w;
            po.m = m;
            plans.push_back(plan_of(po));
        }
        // the mixed waveforms extend one constellation further in the figures
        if ((std::string(w) == "x1" || std::string(w) == "x2")
            && std::find(m_list.begin(), m_list.end(), 4096) == m_list.end()) {
            CommonOpts po = o;
            po.waveform = w;
            po.m = 4096;
            plans.push_back(plan_of(po));
        }
    }

    const SweepResult result = run_sweep(plans, target_ber, metric, bias_grid);

    Table table;
    table.columns = {"waveform", "m", "bias_db", "normalized_bit_rate", "required_db", "metric"};
    const auto push = [&](const SweepRow& row) {
        table.add_row({std::string(waveform_name(row.kind)),
                       static_cast<long long>(row.m),
                       row.kind == WaveformKind::Dco ? Cell(row.bias_db) : Cell(std::string()),
                       row.normalized_bit_rate,
                       row.reachable ? Cell(row.required_db) : Cell(std::string("unreachable")),
                       std::string(eb_metric_name(row.metric))});
    };
    if (o.verbose)
        for (const auto& row : result.dco_bias_rows)
            push(row);
    for (const auto& row : result.rows)
        push(row);
    emit(o, table);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"optical wireless OFDM waveform and link simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");
    app.allow_config_extras(false);

    auto* golden = app.add_subcommand("golden", "verify the built-in known-answer tables");
    double tolerance = 0.005;
    std::string perturb;
    golden->add_option("--tolerance", tolerance, "absolute comparison tolerance");
    golden->add_option("--perturb", perturb, "test hook: offset one reference table");

    CommonOpts papr_o, ber_o, req_o, sweep_o;

    auto* papr = app.add_subcommand("papr", "PAPR CCDF per waveform");
    add_common(papr, papr_o);
    std::vector<std::string> papr_waveforms;
    std::vector<double> papr_levels = {1.0, 3.0};
    double t_min = 0.0, t_max = 16.0, t_step = 0.25;
    papr->add_option("--waveforms", papr_waveforms, "waveforms to include (default: full comparison set)");
    papr->add_option("--mu-db-list", papr_levels, "dco bias levels to include");
    papr->add_option("--thresh-min", t_min, "first CCDF threshold in dB");
    papr->add_option("--thresh-max", t_max, "last CCDF threshold in dB");
    papr->add_option("--thresh-step", t_step, "CCDF threshold spacing in dB");

    auto* ber = app.add_subcommand("ber", "BER against the per-bit power ratio");
    add_common(ber, ber_o);
    std::string ber_power = "elec";
    double eb_min = 10.0, eb_max = 30.0, eb_step = 1.0;
    ber->add_option("--metric", ber_power, "numerator power")->check(CLI::IsMember({"elec", "opt"}));
    ber->add_option("--eb-min", eb_min, "first ratio in dB");
    ber->add_option("--eb-max", eb_max, "last ratio in dB");
    ber->add_option("--eb-step", eb_step, "ratio spacing in dB");

    auto* required = app.add_subcommand("required", "ratio needed to hit a target BER");
    add_common(required, req_o);
    std::string req_power = "elec";
    double req_target = 1e-3;
    required->add_option("--metric", req_power, "numerator power")->check(CLI::IsMember({"elec", "opt"}));
    required->add_option("--target-ber", req_target, "target bit error rate");

    auto* sweep = app.add_subcommand("sweep", "required ratio across waveforms and constellations");
    add_common(sweep, sweep_o);
    std::string sweep_power = "elec";
    double sweep_target = 1e-3;
    std::vector<double> bias_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
    std::vector<int> m_list = {4, 16, 64, 256, 1024};
    sweep->add_option("--metric", sweep_power, "numerator power")->check(CLI::IsMember({"elec", "opt"}));
    sweep->add_option("--target-ber", sweep_target, "target bit error rate");
    sweep->add_option("--bias-grid", bias_grid, "dco bias levels in dB");
    sweep->add_option("--m-list", m_list, "constellation orders");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (golden->parsed())
            return cmd_golden(tolerance, perturb);
        if (papr->parsed()) {
            if (papr_waveforms.empty()) {
                papr_waveforms = {"dco", "x1", "x2", "aco", "u"};
                if (papr->get_option("--waveform")->count())
                    papr_waveforms = {papr_o.waveform};
            }
            return cmd_papr(papr_o, papr_waveforms, papr_levels, t_min, t_max, t_step);
        }
        if (ber->parsed())
            return cmd_ber(ber_o, ber_power, eb_min, eb_max, eb_step);
        if (required->parsed())
            return cmd_required(req_o, req_power, req_target);
        if (sweep->parsed())
            return cmd_sweep(sweep_o, sweep_power, sweep_target, bias_grid, m_list);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
