#pragma once

// Spectral core: DFT/IDFT with the conventions used throughout this
// library, Hermitian-symmetric frame construction, and Gray-coded
// square-QAM mapping on the unnormalized odd-integer grid.

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace owc {

using cpx = std::complex<double>;
using BitBlock = std::vector<std::uint8_t>;

bool is_power_of_two(std::size_t n);

/// Inverse transform, x[k] = (1/N) * sum_m X[m] * exp(+j*2*pi*m*k/N).
/// Throws std::invalid_argument unless the length is a power of two.
std::vector<cpx> idft(std::span<const cpx> spectrum);

/// Forward transform, X[m] = sum_k x[k] * exp(-j*2*pi*m*k/N), so that
/// dft(idft(X)) == X.
std::vector<cpx> dft(std::span<const cpx> samples);

/// Forward transform of a real sample sequence.
std::vector<cpx> dft_real(std::span<const double> samples);

/// Real parts of a sample sequence (imaginary parts are discarded).
std::vector<double> real_part(std::span<const cpx> samples);

// A frame of N subcarrier values. hs_checked records that the frame has
// been verified Hermitian-symmetric: X[m] == conj(X[N-m]) for 0 < m < N/2
// and X[0] == X[N/2] == 0, which makes the inverse transform real-valued.
struct SpectrumFrame {
    std::vector<cpx> values;
    bool hs_checked = false;

    std::size_t size() const { return values.size(); }
};

/// Place N/2-1 data symbols on bins 1..N/2-1 and mirror them so the frame
/// satisfies Hermitian symmetry. Bins 0 and N/2 are zero.
SpectrumFrame build_hs_spectrum(std::span<const cpx> data, std::size_t n);

/// Verify Hermitian symmetry to `tol` (absolute, per component) and set
/// hs_checked. Throws std::invalid_argument on violation.
void check_hermitian(SpectrumFrame& frame, double tol = 1e-12);

/// Split an HS frame into (odd-bins-only, even-bins-only) frames whose
/// element-wise sum is the input. Requires hs_checked.
std::pair<SpectrumFrame, SpectrumFrame> split_odd_even(const SpectrumFrame& frame);

// --- Gray-coded square QAM ------------------------------------------------
//
// Constellation points live on the unnormalized grid {+-1, +-3, ...,
// +-(sqrt(M)-1)} per axis, reflected-Gray-coded per axis, I-axis bits
// before Q-axis bits, most significant bit first. For M = 16 the 2-bit
// axis map is 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.

/// log2(M). Throws std::invalid_argument unless M is one of
/// {4, 16, 64, 256, 1024, 4096}.
int bits_per_symbol(int m);

/// Mean square of the M-point grid, 2*(M-1)/3.
double constellation_mean_square(int m);

cpx qam_map_symbol(std::span<const std::uint8_t> bits, int m);
std::vector<cpx> qam_map(std::span<const std::uint8_t> bits, int m);

/// Hard-decision demap: bits of the grid point nearest to `s`. Ties at a
/// decision boundary resolve toward the smaller coordinate.
void qam_demap_symbol(cpx s, int m, std::uint8_t* out);
BitBlock qam_demap(std::span<const cpx> symbols, int m);

/// Nearest grid point (same decision rule as qam_demap).
cpx slice_to_grid(cpx s, int m);

} // namespace owc
