#include "maglab/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace maglab {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, unnormalized, kernel e^{-+2pi i jk/N}.
void fft_radix2(std::span<cdouble> a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const cdouble wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void dft_direct(std::span<cdouble> a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cdouble> out(n, cdouble(0.0, 0.0));
    const double sgn = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            out[k] += a[j] * cdouble(std::cos(ang), std::sin(ang));
        }
    }
    std::copy(out.begin(), out.end(), a.begin());
}

}  // namespace

void fft_unitary(std::span<cdouble> a, bool inverse) {
    if (a.empty()) return;
    if (is_power_of_two(a.size()))
        fft_radix2(a, inverse);
    else
        dft_direct(a, inverse);
    const double s = 1.0 / std::sqrt(static_cast<double>(a.size()));
    for (cdouble& v : a) v *= s;
}

std::vector<cdouble> fft_unitary_copy(std::span<const cdouble> a, bool inverse) {
    std::vector<cdouble> out(a.begin(), a.end());
    fft_unitary(out, inverse);
    return out;
}

double dft_momentum_spacing(const UniformGrid& grid, double hbar) {
    return 2.0 * pi * hbar / grid.length();
}

std::vector<cdouble> dft_forward(const WaveField& field) {
    const UniformGrid& g = field.grid;
    if (!g.periodic) throw std::invalid_argument("dft_forward: grid must be periodic");

    // F_k = (2 pi hbar)^{-1/2} dy e^{-i lower eta_k/hbar} sqrt(N) (U f)_k
    std::vector<cdouble> out = fft_unitary_copy(field.values, false);
    const double hbar = field.hbar;
    const double scale = g.spacing() * std::sqrt(g.count / (2.0 * pi * hbar));
    for (int k = 0; k < g.count; ++k) {
        const double ang = -g.lower * g.momentum(k, hbar) / hbar;
        out[k] *= scale * cdouble(std::cos(ang), std::sin(ang));
    }
    return out;
}

WaveField dft_inverse(const UniformGrid& grid, double hbar, std::span<const cdouble> coeffs) {
    if (!grid.periodic) throw std::invalid_argument("dft_inverse: grid must be periodic");
    if (coeffs.size() != static_cast<std::size_t>(grid.count))
        throw std::invalid_argument("dft_inverse: coefficient count must match grid");

    std::vector<cdouble> tmp(coeffs.begin(), coeffs.end());
    for (int k = 0; k < grid.count; ++k) {
        const double ang = grid.lower * grid.momentum(k, hbar) / hbar;
        tmp[k] *= cdouble(std::cos(ang), std::sin(ang));
    }
    fft_unitary(tmp, true);
    const double scale =
        dft_momentum_spacing(grid, hbar) * std::sqrt(grid.count / (2.0 * pi * hbar));
    for (cdouble& v : tmp) v *= scale;
    return WaveField(grid, std::move(tmp), hbar);
}

TrigInterpolator::TrigInterpolator(const UniformGrid& grid, std::span<const cdouble> values)
    : grid_(grid), coeffs_(fft_unitary_copy(values, false)) {
    if (!grid.periodic) throw std::invalid_argument("TrigInterpolator: grid must be periodic");
    const double s = 1.0 / std::sqrt(static_cast<double>(grid.count));
    for (cdouble& c : coeffs_) c *= s;  // now plain 1/N-scaled DFT coefficients
}

cdouble TrigInterpolator::operator()(double x) const {
    // f(x) = sum_k c_k e^{i s(k) 2pi (x - lower)/L}
    const int n = grid_.count;
    const double base = 2.0 * pi * (x - grid_.lower) / grid_.length();
    cdouble acc(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
        const int s = k < (n + 1) / 2 ? k : k - n;
        const double ang = base * s;
        acc += coeffs_[k] * cdouble(std::cos(ang), std::sin(ang));
    }
    return acc;
}

}  // namespace maglab
