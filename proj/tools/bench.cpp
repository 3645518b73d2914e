// Compares the serial reference and the OpenMP-parallel symbol loop on the
// same workload and checks that they produce identical results.

#include "owc/sim.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace owc;

namespace {

double seconds_for(const SimPlan& plan, const NoiseConfig& noise, Exec exec, BerPoint& out)
{
    const auto start = std::chrono::steady_clock::now();
    out = run_ber_point(plan, noise, exec);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main(int argc, char** argv)
{
    SimPlan plan;
    plan.waveform.kind = WaveformKind::X2;
    plan.waveform.n = argc > 1 ? std::atoi(argv[1]) : 2048;
    plan.waveform.m = 64;
    plan.noise_mode = NoiseMode::IndependentOnly;
    plan.num_symbols = argc > 2 ? std::atoi(argv[2]) : 2000;
    plan.master_seed = {2024, 0};

    const NoiseConfig noise{0.0, 1e-4};

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("workload: x2, n=%d, m=%d, %d symbols\n", plan.waveform.n, plan.waveform.m,
                plan.num_symbols);

    BerPoint serial, parallel;
    const double t_serial = seconds_for(plan, noise, Exec::Serial, serial);
    const double t_parallel = seconds_for(plan, noise, Exec::Parallel, parallel);

    std::printf("serial:   %8.3f s  (%.1f symbols/s)\n", t_serial, plan.num_symbols / t_serial);
    std::printf("parallel: %8.3f s  (%.1f symbols/s, %.2fx)\n", t_parallel,
                plan.num_symbols / t_parallel, t_serial / t_parallel);

    const bool same = serial.ber.bit_errors == parallel.ber.bit_errors
                      && serial.ber.bits_total == parallel.ber.bits_total
                      && serial.stats.sum_sq == parallel.stats.sum_sq
                      && serial.stats.sum_abs == parallel.stats.sum_abs;
    std::printf("results identical: %s (errors %lld / bits %lld)\n", same ? "yes" : "NO",
                serial.ber.bit_errors, serial.ber.bits_total);
    return same ? 0 : 1;
}
