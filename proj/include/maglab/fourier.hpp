#pragma once

#include <span>
#include <vector>

#include "maglab/common.hpp"
#include "maglab/grid.hpp"

namespace maglab {

/// In-place unitary DFT in FFT index order: a_k <- N^{-1/2} sum_j a_j e^{-+2pi i jk/N}
/// (sign - forward, + inverse). Radix-2 for power-of-two lengths, direct
/// summation otherwise.
void fft_unitary(std::span<cdouble> a, bool inverse);

std::vector<cdouble> fft_unitary_copy(std::span<const cdouble> a, bool inverse);

/// Semiclassical Fourier transform on a periodic grid, forward kernel
/// e^{-i y eta / hbar} with symmetric 1/sqrt(2 pi hbar) normalization:
///   F_k = (2 pi hbar)^{-1/2} dy sum_j e^{-i y_j eta_k / hbar} f(y_j),
/// eta_k on the grid's momentum lattice in FFT index order. The pair below is
/// exactly unitary: dy sum|f|^2 = deta sum|F|^2 with deta = 2 pi hbar / L.
std::vector<cdouble> dft_forward(const WaveField& field);

WaveField dft_inverse(const UniformGrid& grid, double hbar, std::span<const cdouble> coeffs);

/// Momentum-lattice spacing 2 pi hbar / L of the unitary pair above.
double dft_momentum_spacing(const UniformGrid& grid, double hbar);

/// Band-limited evaluation of a periodic grid function at arbitrary points.
/// Construction costs one FFT; each eval is an O(N) coefficient sum.
class TrigInterpolator {
public:
    TrigInterpolator(const UniformGrid& grid, std::span<const cdouble> values);

    cdouble operator()(double x) const;

private:
    UniformGrid grid_;
    std::vector<cdouble> coeffs_;  // plain DFT coefficients, FFT order, scaled 1/N
};

}  // namespace maglab
