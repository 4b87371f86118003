#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maglab/flatmag.hpp"
#include "maglab/fourier.hpp"

using namespace maglab;

namespace {

// Oscillatory-quadrature oracle for the constant-field propagation integral:
// |f^(u)(x)| = (2 pi hbar)^{-1/2} |int e^{-i|y-u|^2/(2 hbar)} f(x+y) dy|
// (the overall unimodular factors drop from the modulus).
double propagated_modulus_oracle(double hbar, double u, double x) {
    const double amp = std::pow(pi * hbar, -0.25);
    const auto integrand = [&](double y) {
        const double phase = -(y - u) * (y - u) / (2.0 * hbar);
        const double f = amp * std::exp(-(x + y) * (x + y) / (2.0 * hbar));
        return f * cdouble(std::cos(phase), std::sin(phase));
    };
    const double window = 10.0 * std::sqrt(hbar) + std::abs(x) + std::abs(u) + 1.0;
    const cdouble integral =
        adaptive_integrate(integrand, -window, window, 1e-12 * std::sqrt(hbar), 8000000, 256);
    return std::abs(integral) / std::sqrt(2.0 * pi * hbar);
}

}  // namespace

TEST_CASE("propagation multiplies grid modes by the exact phase") {
    UniformGrid g(-8.0, 8.0, 256, true);
    const double hbar = 0.1, u = 0.3;
    WaveField f(g, hbar);
    const int mode = 9;
    for (int j = 0; j < g.count; ++j) {
        const double ang = g.momentum(mode, hbar) * g.point(j) / hbar;
        f.values[j] = cdouble(std::cos(ang), std::sin(ang)) / 4.0;
    }
    const WaveField out = flat_magnetic_propagate(f, u);
    const double eta = g.momentum(mode, hbar);
    const double phase = (eta + u) * (eta + u) / (2.0 * hbar);
    const cdouble factor(std::cos(phase), std::sin(phase));
    double gap = 0.0;
    for (int j = 0; j < g.count; ++j)
        gap = std::max(gap, std::abs(out.values[j] - factor * f.values[j]));
    CHECK(gap <= 1e-12);
}

TEST_CASE("propagation is unitary and homogeneous") {
    UniformGrid g(-8.0, 8.0, 512, true);
    const WaveField f = flat_gaussian(g, 0.05);
    CHECK(std::abs(f.l2_norm() - 1.0) <= 1e-8);

    const WaveField out = flat_magnetic_propagate(f, 0.4);
    CHECK(std::abs(out.l2_norm() - f.l2_norm()) <= 1e-12);

    WaveField scaled = f;
    for (cdouble& v : scaled.values) v *= cdouble(0.0, -2.0);
    const WaveField sout = flat_magnetic_propagate(scaled, 0.4);
    double gap = 0.0;
    for (int j = 0; j < g.count; ++j)
        gap = std::max(gap, std::abs(sout.values[j] - cdouble(0.0, -2.0) * out.values[j]));
    CHECK(gap <= 1e-12);
}

TEST_CASE("propagation inverts exactly through the conjugate multiplier") {
    UniformGrid g(-8.0, 8.0, 256, true);
    const double hbar = 0.1, u = -0.2;
    const WaveField f = flat_gaussian(g, hbar);
    const WaveField fwd = flat_magnetic_propagate(f, u);

    std::vector<cdouble> coeffs = fft_unitary_copy(fwd.values, false);
    for (int k = 0; k < g.count; ++k) {
        const double eta = g.momentum(k, hbar);
        const double phase = -(eta + u) * (eta + u) / (2.0 * hbar);
        coeffs[k] *= cdouble(std::cos(phase), std::sin(phase));
    }
    fft_unitary(coeffs, true);
    double gap = 0.0;
    for (int j = 0; j < g.count; ++j) gap = std::max(gap, std::abs(coeffs[j] - f.values[j]));
    CHECK(gap <= 1e-12);
}

TEST_CASE("propagated gaussian matches the oscillatory-integral oracle") {
    UniformGrid g(-8.0, 8.0, 512, true);
    const double hbar = 0.05, u = 0.3;
    const WaveField f = flat_gaussian(g, hbar);
    const WaveField out = flat_magnetic_propagate(f, u);
    const double numeric = std::abs(out.interp(0.0));
    const double oracle = propagated_modulus_oracle(hbar, u, 0.0);
    CHECK(std::abs(numeric - oracle) <= 1e-6 * oracle);
}

TEST_CASE("boundary leakage raises a truncation error") {
    UniformGrid g(-2.0, 2.0, 64, true);
    WaveField f(g, 0.3);
    for (int j = 0; j < g.count; ++j) f.values[j] = 1.0;  // mass everywhere
    CHECK_THROWS_AS(flat_magnetic_propagate(f, 0.1), domain_truncation_error);
    try {
        flat_magnetic_propagate(f, 0.1);
    } catch (const domain_truncation_error& e) {
        CHECK(e.leakage() > 1e-10);
    }
}

TEST_CASE("averaged intensity is quadratic and vanishes on the zero field") {
    UniformGrid g(-8.0, 8.0, 256, true);
    const double hbar = 0.1;
    const CutoffProfile chi(1.0, 2.0);
    const std::array<double, 4> breaks{-2.0, -1.0, 1.0, 2.0};
    const IntervalQuadrature u_quad = composite_gauss_legendre(24, breaks);

    WaveField zero(g, hbar);
    CHECK(averaged_intensity_flat(zero, 0.0, chi, u_quad) == 0.0);

    const WaveField f = flat_gaussian(g, hbar);
    const double base = averaged_intensity_flat(f, 0.0, chi, u_quad);
    CHECK(base > 0.0);
    WaveField scaled = f;
    for (cdouble& v : scaled.values) v *= 3.0;
    const double big = averaged_intensity_flat(scaled, 0.0, chi, u_quad);
    CHECK(big == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("averaged intensity rejects quadratures that miss the chi support") {
    UniformGrid g(-8.0, 8.0, 256, true);
    const WaveField f = flat_gaussian(g, 0.1);
    const CutoffProfile chi(1.0, 2.0);
    const IntervalQuadrature narrow = gauss_legendre(16, -0.5, 0.5);
    CHECK_THROWS_AS(averaged_intensity_flat(f, 0.0, chi, narrow), std::invalid_argument);
}

TEST_CASE("weyl quantization of the full symbol is the identity") {
    UniformGrid g(-6.0, 6.0, 64, true);
    const double hbar = 0.1;
    // inner radius beyond every midpoint-momentum separation on the grid
    const CutoffProfile wide(50.0, 60.0);
    const WeylMatrix w = weyl_quantize_chi(g, hbar, wide);
    const double gap =
        (w.matrix - Eigen::MatrixXcd::Identity(g.count, g.count)).cwiseAbs().maxCoeff();
    CHECK(gap <= 1e-6);
}

TEST_CASE("weyl matrix is hermitian and matches the direct triple sum") {
    UniformGrid g(-4.0, 4.0, 32, true);
    const double hbar = 0.2;
    const CutoffProfile chi(1.0, 2.0);
    const WeylMatrix w = weyl_quantize_chi(g, hbar, chi);
    CHECK((w.matrix - Eigen::MatrixXcd(w.matrix.adjoint())).cwiseAbs().maxCoeff() <= 1e-9);

    Eigen::MatrixXcd direct(g.count, g.count);
    for (int j = 0; j < g.count; ++j)
        for (int l = 0; l < g.count; ++l) {
            cdouble acc(0.0, 0.0);
            for (int k = 0; k < g.count; ++k) {
                const double eta = g.momentum(k, hbar);
                const double ang = (g.point(j) - g.point(l)) * eta / hbar;
                const double mid = 0.5 * (g.point(j) + g.point(l));
                acc += chi_eval(chi, std::abs(mid - eta)) * cdouble(std::cos(ang), std::sin(ang));
            }
            direct(j, l) = acc / static_cast<double>(g.count);
        }
    CHECK((w.matrix - direct).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("weyl operator norm is uniformly bounded in hbar") {
    const CutoffProfile chi(1.0, 2.0);
    std::vector<double> norms;
    for (double hbar : {0.1, 0.05}) {
        UniformGrid g(-6.0, 6.0, 256, true);
        const WeylMatrix w = weyl_quantize_chi(g, hbar, chi);
        const EigenSystem es = hermitian_eigs(w.matrix);
        norms.push_back(
            std::max(std::abs(es.values[0]), std::abs(es.values[es.values.size() - 1])));
    }
    for (double n : norms) CHECK(n <= 1.2);
    CHECK(std::abs(norms[0] - norms[1]) <= 0.1 * norms[0]);
}

TEST_CASE("motivation identity holds to quadrature accuracy") {
    const CutoffProfile chi(1.0, 2.0);
    for (double hbar : {0.1, 0.05}) {
        UniformGrid g(-8.0, 8.0, 512, true);
        const WaveField f = flat_gaussian(g, hbar);
        for (double x : {0.0, 0.5, -0.5}) {
            const MotivationIdentity check = motivation_identity_check(f, x, chi);
            CHECK(check.gap <= 1e-6 * std::max(check.lhs, 1.0));
        }
        // one lattice step sideways
        const double x1 = 0.5 + g.spacing();
        const MotivationIdentity moved = motivation_identity_check(f, x1, chi);
        CHECK(moved.gap <= 1e-6 * std::max(moved.lhs, 1.0));
    }
}

TEST_CASE("motivation identity on the zero field is identically zero") {
    UniformGrid g(-8.0, 8.0, 256, true);
    WaveField zero(g, 0.1);
    const MotivationIdentity check = motivation_identity_check(zero, 0.0, CutoffProfile(1.0, 2.0));
    CHECK(check.lhs == 0.0);
    CHECK(std::abs(check.rhs) <= 1e-15);
    CHECK(check.gap <= 1e-15);
}

TEST_CASE("motivation identity guards the periodic seam") {
    UniformGrid g(-8.0, 8.0, 512, true);
    const WaveField f = flat_gaussian(g, 0.1);
    CHECK_THROWS_AS(motivation_identity_check(f, 7.0, CutoffProfile(1.0, 2.0)),
                    domain_truncation_error);
    CHECK_THROWS_AS(motivation_identity_check(f, 0.5 * g.spacing(), CutoffProfile(1.0, 2.0)),
                    std::invalid_argument);
}

TEST_CASE("averaged intensity stays in a two-sided band across hbar") {
    const CutoffProfile chi(1.0, 2.0);
    const std::array<double, 4> breaks{-2.0, -1.0, 1.0, 2.0};
    const IntervalQuadrature u_quad = composite_gauss_legendre(32, breaks);
    double lo = 1e300, hi = 0.0;
    for (double hbar : {0.1, 0.05, 0.02}) {
        UniformGrid g(-8.0, 8.0, 512, true);
        const WaveField f = flat_gaussian(g, hbar);
        for (double x : {-0.5, 0.0, 0.5}) {
            const double v = averaged_intensity_flat(f, x, chi, u_quad, Exec::Parallel);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    CHECK(hi / lo <= 2.0);
}

TEST_CASE("2-d deformed evaluator reduces to the 1-d tensor structure") {
    UniformGrid g(-6.0, 6.0, 64, true);
    const double hbar = 0.1;
    const FlatState2D base = flat_gaussian_2d(g, hbar);
    const Flat2DDeformedEvaluator eval(base);

    // u = 0 evaluation at grid points reproduces the sampled gaussian
    std::vector<Vec2> pts;
    for (int j : {3, 17, 40}) pts.push_back({g.point(j), g.point(2 * j % g.count)});
    const std::vector<cdouble> vals = eval.eval({0.0, 0.0}, pts);
    // the u = 0 multiplier is the free propagator, so compare against the
    // tensor product of two 1-d propagations
    const WaveField f1 = flat_magnetic_propagate(flat_gaussian(g, hbar), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cdouble expected = f1.interp(pts[i][0]) * f1.interp(pts[i][1]);
        CHECK(std::abs(vals[i] - expected) <= 1e-10);
    }
    CHECK(eval.wavenumber_bound({0.3, -0.4}) >= 0.5);
}
