#include "maglab/flatmag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maglab/fourier.hpp"

namespace maglab {

WaveField flat_gaussian(const UniformGrid& grid, double hbar) {
    WaveField f(grid, hbar);
    const double amp = std::pow(pi * hbar, -0.25);
    for (int j = 0; j < grid.count; ++j) {
        const double y = grid.point(j);
        f.values[j] = amp * std::exp(-y * y / (2.0 * hbar));
    }
    return f;
}

WaveField flat_magnetic_propagate(const WaveField& state, double u) {
    if (!state.grid.periodic)
        throw std::invalid_argument("flat_magnetic_propagate: grid must be periodic");
    const double leakage = state.boundary_mass_fraction(4.0 * std::sqrt(state.hbar));
    if (leakage > 1e-10)
        throw domain_truncation_error("flat_magnetic_propagate: state touches the box boundary",
                                      leakage);

    std::vector<cdouble> coeffs = fft_unitary_copy(state.values, false);
    const double hbar = state.hbar;
    for (int k = 0; k < state.grid.count; ++k) {
        const double eta = state.grid.momentum(k, hbar);
        const double phase = (eta + u) * (eta + u) / (2.0 * hbar);
        coeffs[k] *= cdouble(std::cos(phase), std::sin(phase));
    }
    fft_unitary(coeffs, true);
    return WaveField(state.grid, std::move(coeffs), hbar);
}

double averaged_intensity_flat(const WaveField& state, double x, const CutoffProfile& chi,
                               const IntervalQuadrature& u_quad, Exec exec) {
    if (u_quad.size() == 0) throw std::invalid_argument("averaged_intensity_flat: empty quadrature");
    const auto [lo, hi] = std::minmax_element(u_quad.nodes.begin(), u_quad.nodes.end());
    double covered = 0.0;
    for (double w : u_quad.weights) covered += w;
    if (*lo > -chi.inner_radius || *hi < chi.inner_radius ||
        covered < 2.0 * chi.outer_radius * (1.0 - 1e-9))
        throw std::invalid_argument("averaged_intensity_flat: u quadrature must cover the chi support");

    std::vector<double> terms(u_quad.size(), 0.0);
    par_for(exec, u_quad.size(), [&](std::size_t m) {
        const double u = u_quad.nodes[m];
        const double weight = chi_eval(chi, std::abs(u));
        if (weight == 0.0) return;
        const WaveField deformed = flat_magnetic_propagate(state, u);
        const double mod = std::abs(deformed.interp(x));
        terms[m] = u_quad.weights[m] * weight * mod * mod;
    });
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

WeylMatrix weyl_quantize_chi(const UniformGrid& grid, double hbar, const CutoffProfile& chi) {
    if (!grid.periodic) throw std::invalid_argument("weyl_quantize_chi: grid must be periodic");
    const int n = grid.count;

    // W_{jl} = (1/N) sum_k chi(|m_{jl} - eta_k|) e^{2 pi i k (j-l)/N} with
    // m_{jl} = (y_j + y_l)/2. For each of the 2N-1 midpoint values the k-sum
    // over all separations is a single inverse FFT.
    std::vector<std::vector<cdouble>> rows(static_cast<std::size_t>(2 * n - 1));
    std::vector<cdouble> g(n);
    const double sqn = std::sqrt(static_cast<double>(n));
    for (int p = 0; p < 2 * n - 1; ++p) {
        const double mid = grid.lower + 0.5 * p * grid.spacing();
        for (int k = 0; k < n; ++k)
            g[k] = chi_eval(chi, std::abs(mid - grid.momentum(k, hbar)));
        std::vector<cdouble> c = fft_unitary_copy(g, true);
        for (cdouble& v : c) v *= sqn / n;
        rows[p] = std::move(c);
    }

    Eigen::MatrixXcd w(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) w(j, l) = rows[j + l][((j - l) % n + n) % n];
    w = 0.5 * (w + Eigen::MatrixXcd(w.adjoint()));
    return WeylMatrix{std::move(w), chi, hbar, grid};
}

cdouble weyl_expectation(const WeylMatrix& op, std::span<const cdouble> g) {
    if (g.size() != static_cast<std::size_t>(op.grid.count))
        throw std::invalid_argument("weyl_expectation: vector length must match grid");
    const Eigen::Map<const Eigen::VectorXcd> v(g.data(), static_cast<Eigen::Index>(g.size()));
    return (v.adjoint() * (op.matrix * v))(0, 0) * op.grid.spacing();
}

MotivationIdentity motivation_identity_check(const WaveField& state, double x,
                                             const CutoffProfile& chi, int panel_order) {
    const double dy = state.grid.spacing();
    const double cells = x / dy;
    const int s = static_cast<int>(std::lround(cells));
    if (std::abs(cells - s) > 1e-9 * std::max(1.0, std::abs(cells)))
        throw std::invalid_argument("motivation_identity_check: x must lie on the grid lattice");

    const WaveField g = state.shifted_by_cells(s);
    const double leakage = g.boundary_mass_fraction(4.0 * std::sqrt(state.hbar));
    if (leakage > 1e-10)
        throw domain_truncation_error(
            "motivation_identity_check: translation wraps mass around the boundary", leakage);

    // chi is smooth but only piecewise analytic; the panels end at its knots.
    const double in = chi.inner_radius, out = chi.outer_radius;
    const std::array<double, 4> breaks{-out, -in, in, out};
    const IntervalQuadrature u_quad = composite_gauss_legendre(panel_order, breaks);

    MotivationIdentity result{};
    result.lhs = averaged_intensity_flat(state, x, chi, u_quad, Exec::Serial);
    const WeylMatrix w = weyl_quantize_chi(state.grid, state.hbar, chi);
    result.rhs = weyl_expectation(w, g.values).real();
    result.gap = std::abs(result.lhs - result.rhs);
    return result;
}

// ---- 2-D ----

FlatState2D flat_gaussian_2d(const UniformGrid& grid, double hbar) {
    FlatState2D f{grid, std::vector<cdouble>(static_cast<std::size_t>(grid.count) * grid.count),
                  hbar};
    const double amp = std::pow(pi * hbar, -0.5);
    for (int j1 = 0; j1 < grid.count; ++j1) {
        const double x1 = grid.point(j1);
        for (int j2 = 0; j2 < grid.count; ++j2) {
            const double x2 = grid.point(j2);
            f.values[static_cast<std::size_t>(j1) * grid.count + j2] =
                amp * std::exp(-(x1 * x1 + x2 * x2) / (2.0 * hbar));
        }
    }
    return f;
}

Flat2DDeformedEvaluator::Flat2DDeformedEvaluator(const FlatState2D& base)
    : grid_(base.grid), hbar_(base.hbar), coeffs_(base.values) {
    const int n = grid_.count;
    // unitary FFT along rows then columns
    std::vector<cdouble> tmp(n);
    for (int j1 = 0; j1 < n; ++j1)
        fft_unitary({coeffs_.data() + static_cast<std::size_t>(j1) * n,
                     static_cast<std::size_t>(n)},
                    false);
    for (int j2 = 0; j2 < n; ++j2) {
        for (int j1 = 0; j1 < n; ++j1) tmp[j1] = coeffs_[static_cast<std::size_t>(j1) * n + j2];
        fft_unitary(tmp, false);
        for (int j1 = 0; j1 < n; ++j1) coeffs_[static_cast<std::size_t>(j1) * n + j2] = tmp[j1];
    }
}

std::vector<cdouble> Flat2DDeformedEvaluator::eval(Vec2 u, std::span<const Vec2> points) const {
    const int n = grid_.count;
    std::vector<cdouble> deformed(coeffs_.size());
    for (int k1 = 0; k1 < n; ++k1) {
        const double e1 = grid_.momentum(k1, hbar_);
        for (int k2 = 0; k2 < n; ++k2) {
            const double e2 = grid_.momentum(k2, hbar_);
            const double phase =
                ((e1 + u[0]) * (e1 + u[0]) + (e2 + u[1]) * (e2 + u[1])) / (2.0 * hbar_);
            deformed[static_cast<std::size_t>(k1) * n + k2] =
                coeffs_[static_cast<std::size_t>(k1) * n + k2] *
                cdouble(std::cos(phase), std::sin(phase));
        }
    }

    // f(p) = (1/N) sum_{k1,k2} G_{k1 k2} e^{i 2 pi (s(k1) b1 + s(k2) b2)}, factorized
    std::vector<cdouble> out;
    out.reserve(points.size());
    std::vector<cdouble> e1(n), e2(n);
    for (const Vec2& p : points) {
        const double b1 = 2.0 * pi * (p[0] - grid_.lower) / grid_.length();
        const double b2 = 2.0 * pi * (p[1] - grid_.lower) / grid_.length();
        for (int k = 0; k < n; ++k) {
            const int sk = k < (n + 1) / 2 ? k : k - n;
            e1[k] = cdouble(std::cos(b1 * sk), std::sin(b1 * sk));
            e2[k] = cdouble(std::cos(b2 * sk), std::sin(b2 * sk));
        }
        cdouble acc(0.0, 0.0);
        for (int k1 = 0; k1 < n; ++k1) {
            cdouble inner(0.0, 0.0);
            const cdouble* row = deformed.data() + static_cast<std::size_t>(k1) * n;
            for (int k2 = 0; k2 < n; ++k2) inner += row[k2] * e2[k2];
            acc += e1[k1] * inner;
        }
        out.push_back(acc / static_cast<double>(n));
    }
    return out;
}

double Flat2DDeformedEvaluator::wavenumber_bound(Vec2 u, double mass_tol) const {
    const int n = grid_.count;
    double total = 0.0;
    for (const cdouble& c : coeffs_) total += std::norm(c);
    double bound = 0.0;
    for (int k1 = 0; k1 < n; ++k1) {
        const double m1 = grid_.momentum(k1, hbar_);
        for (int k2 = 0; k2 < n; ++k2) {
            const double m2 = grid_.momentum(k2, hbar_);
            if (std::norm(coeffs_[static_cast<std::size_t>(k1) * n + k2]) > mass_tol * total)
                bound = std::max(bound, std::hypot(m1, m2));
        }
    }
    return bound + std::hypot(u[0], u[1]);
}

}  // namespace maglab
