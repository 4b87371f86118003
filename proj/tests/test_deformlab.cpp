#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "maglab/deformlab.hpp"
#include "maglab/oscillator.hpp"

using namespace maglab;

namespace {

MagneticFamily constant_family() {
    MagneticFamily f;
    f.space_dim = 2;
    f.param_dim = 2;
    f.components = [](std::span<const double>, std::span<const double> u) {
        return std::vector<double>{u[0], u[1]};
    };
    return f;
}

MagneticFamily degenerate_family() {
    MagneticFamily f;
    f.space_dim = 2;
    f.param_dim = 2;
    f.components = [](std::span<const double>, std::span<const double> u) {
        return std::vector<double>{u[0], u[0]};
    };
    return f;
}

MagneticFamily overcomplete_family() {
    MagneticFamily f;
    f.space_dim = 2;
    f.param_dim = 3;
    f.components = [](std::span<const double>, std::span<const double> u) {
        return std::vector<double>{u[0] + u[2], u[1]};
    };
    return f;
}

MagneticFamily curved_family() {
    MagneticFamily f;
    f.space_dim = 2;
    f.param_dim = 2;
    f.components = [](std::span<const double> x, std::span<const double> u) {
        return std::vector<double>{u[0] * (1.0 + x[0] * x[0]), u[1] * std::exp(x[0])};
    };
    f.jacobian = [](std::span<const double> x, std::span<const double>) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
        j(0, 0) = 1.0 + x[0] * x[0];
        j(1, 1) = std::exp(x[0]);
        return j;
    };
    return f;
}

}  // namespace

TEST_CASE("jacobian of the constant family is the identity") {
    const MagneticFamily f = constant_family();
    const std::vector<double> x{0.1, -0.2}, u{0.05, 0.02};
    const Eigen::MatrixXd j = jacobian_du(f, x, u, 1e-5);
    CHECK((j - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("jacobian of the degenerate family is rank one") {
    const MagneticFamily f = degenerate_family();
    const std::vector<double> x{0.0, 0.0}, u{0.0, 0.0};
    const Eigen::MatrixXd j = jacobian_du(f, x, u, 1e-5);
    Eigen::MatrixXd expected(2, 2);
    expected << 1.0, 0.0, 1.0, 0.0;
    CHECK((j - expected).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("jacobian agrees with the declared analytic form") {
    const MagneticFamily f = curved_family();
    const std::vector<double> x{0.5, 0.0}, u{0.1, -0.1};
    const Eigen::MatrixXd j = jacobian_du(f, x, u, 1e-5);
    CHECK(j(0, 0) == doctest::Approx(1.25).epsilon(1e-9));
    CHECK(j(1, 1) == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
    CHECK(std::abs(j(0, 1)) <= 1e-10);

    CHECK_THROWS_AS(jacobian_du(f, x, u, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(jacobian_du(f, x, u, 1e-2), std::invalid_argument);

    MagneticFamily lying = curved_family();
    lying.jacobian = [](std::span<const double>, std::span<const double>) {
        return Eigen::MatrixXd::Identity(2, 2).eval();
    };
    CHECK_THROWS_AS(jacobian_du(lying, x, u, 1e-5), inconsistent_family_error);
}

TEST_CASE("admissibility classifies the example families") {
    const std::vector<std::vector<double>> xs{{0.0, 0.0}, {0.3, -0.2}};
    const std::vector<std::vector<double>> us2{{0.0, 0.0}, {0.1, -0.1}};
    const std::vector<std::vector<double>> us3{{0.0, 0.0, 0.0}, {0.1, -0.1, 0.05}};

    const AdmissibilityReport a = admissibility_check(constant_family(), xs, us2, 1e-3);
    CHECK(a.min_singular_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a.admissible);

    const AdmissibilityReport b = admissibility_check(degenerate_family(), xs, us2, 1e-3);
    CHECK(std::abs(b.min_singular_value) <= 1e-10);
    CHECK_FALSE(b.admissible);

    const AdmissibilityReport c = admissibility_check(overcomplete_family(), xs, us3, 1e-3);
    CHECK(c.min_singular_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.admissible);
    REQUIRE(c.chosen_subset.size() == 2);
    CHECK(c.chosen_subset[0] == 0);  // ties resolve toward the smallest tuple
    CHECK(c.chosen_subset[1] == 1);
}

TEST_CASE("admissibility rejects families with omega_0 != 0") {
    MagneticFamily f = constant_family();
    f.components = [](std::span<const double>, std::span<const double> u) {
        return std::vector<double>{u[0] + 0.5, u[1]};
    };
    const std::vector<std::vector<double>> xs{{0.0, 0.0}};
    const std::vector<std::vector<double>> us{{0.0, 0.0}};
    CHECK_THROWS_AS(admissibility_check(f, xs, us, 1e-3), std::invalid_argument);
}

TEST_CASE("sigma_min is invariant under orthogonal reparametrization") {
    std::mt19937 rng(99);
    std::normal_distribution<double> d(0.0, 1.0);
    const std::vector<std::vector<double>> xs{{0.0, 0.0}, {0.2, 0.1}};
    const std::vector<std::vector<double>> us{{0.0, 0.0, 0.0}, {0.05, -0.08, 0.02}};
    const MagneticFamily base = overcomplete_family();
    const AdmissibilityReport ref = admissibility_check(base, xs, us, 1e-3);

    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd g(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = d(rng);
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
        MagneticFamily rotated = base;
        rotated.components = [q](std::span<const double> x, std::span<const double> u) {
            std::vector<double> v(3);
            for (int i = 0; i < 3; ++i) v[i] = q(i, 0) * u[0] + q(i, 1) * u[1] + q(i, 2) * u[2];
            return overcomplete_family().components(x, v);
        };
        const AdmissibilityReport rot = admissibility_check(rotated, xs, us, 1e-3);
        CHECK(std::abs(rot.min_singular_value - ref.min_singular_value) <= 1e-10);
    }
}

TEST_CASE("average over ball basics") {
    const BallQuadrature disk = disk_quadrature(0.5, 16, 32);
    const double area = pi * 0.25;
    CHECK(average_over_ball([](std::span<const double>) { return 3.0; }, disk) ==
          doctest::Approx(3.0 * area).epsilon(1e-10));

    const double bump = average_over_ball(
        [](std::span<const double> u) { return std::hypot(u[0], u[1]) < 0.2 ? 1.0 : 0.0; }, disk);
    CHECK(bump >= 0.0);
    CHECK(bump <= area);

    try {
        average_over_ball(
            [](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); },
            disk);
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("node 0") != std::string::npos);
    }
}

TEST_CASE("generic ball average reproduces the oscillator intensity") {
    const HOConfig config(0.1, 0.5, 0.5, 256);
    const int count = 8;
    const BallQuadrature ball = interval_ball_quadrature(0.5, count);
    const IntervalQuadrature u_quad = gauss_legendre(count, -0.5, 0.5);

    const WaveField psi = ho_ground_state(config);
    const auto intensity = [&](std::span<const double> u) {
        const HermitianOperatorDense op = build_ho_operator(config, u[0]);
        const WaveField out = propagate_spectral(op, psi, config.t0, config.hbar);
        const double m = std::abs(out.interp(0.0));
        return m * m;
    };
    const double generic = average_over_ball(intensity, ball);
    const double direct = averaged_intensity_ho(config, 0.0, u_quad).value;
    CHECK(generic == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("two-sided band summary") {
    std::vector<AverageProfile> flat(3);
    for (int i = 0; i < 3; ++i) flat[i] = AverageProfile{0.1 / (i + 1), {0.0, 0.1}, {2.0, 2.0}};
    const BandSummary band = two_sided_band(flat);
    CHECK(band.ratio == doctest::Approx(1.0));

    std::vector<AverageProfile> degenerate = flat;
    degenerate[1].values[0] = 0.0;
    CHECK_THROWS_AS(two_sided_band(degenerate), degenerate_band_error);

    std::vector<AverageProfile> few(2);
    few[0] = few[1] = flat[0];
    CHECK_THROWS_AS(two_sided_band(few), std::invalid_argument);
}

TEST_CASE("restriction integral of a unimodular state is the length") {
    const Curve seg = segment_curve({-0.3, 0.4}, {0.5, -0.2}, 64);
    const double len = std::hypot(0.8, -0.6);
    const double v =
        restriction_integral([](std::array<double, 2>) { return cdouble(1.0, 0.0); }, seg);
    CHECK(v == doctest::Approx(len).epsilon(1e-12));

    const Curve pt = point_curve({0.2, -0.1});
    const double pv = restriction_integral(
        [](std::array<double, 2> p) { return cdouble(p[0] + p[1], 0.0); }, pt);
    CHECK(pv == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("restriction integral matches the gaussian line oracle") {
    const double hbar = 0.05;
    const double amp = std::pow(pi * hbar, -0.5);
    const std::array<double, 2> a{-0.5, -0.3}, b{0.6, 0.4};
    const Curve seg = segment_curve(a, b, 200);
    const auto state = [&](std::array<double, 2> p) {
        return cdouble(amp * std::exp(-(p[0] * p[0] + p[1] * p[1]) / (2.0 * hbar)), 0.0);
    };
    const double numeric = restriction_integral(state, seg);

    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len = std::hypot(dx, dy);
    const double alpha = (dx * dx + dy * dy) / hbar;
    const double beta = 2.0 * (a[0] * dx + a[1] * dy) / hbar;
    const double gamma = (a[0] * a[0] + a[1] * a[1]) / hbar;
    const double sa = std::sqrt(alpha), shift = beta / (2.0 * sa);
    const double exact = amp * amp * len * std::exp(shift * shift - gamma) * std::sqrt(pi) /
                         (2.0 * sa) * (std::erf(sa + shift) - std::erf(shift));
    CHECK(std::abs(numeric - exact) <= 1e-6 * exact);

    CHECK_THROWS_AS(restriction_integral(state, seg, 1e6), resolution_error);
}

TEST_CASE("fubini gap is pure reassociation") {
    const BallQuadrature ball = interval_ball_quadrature(0.5, 16);
    std::vector<double> per_u(ball.size(), 2.5);
    double swapped = 0.0;
    for (std::size_t m = 0; m < ball.size(); ++m) swapped += ball.weights[m] * per_u[m];
    CHECK(fubini_check(per_u, ball, swapped) == 0.0);

    std::vector<double> zeros(ball.size(), 0.0);
    CHECK(fubini_check(zeros, ball, 0.0) == 0.0);

    CHECK_THROWS_AS(fubini_check(per_u, ball, swapped + 1.0), order_swap_error);
}

TEST_CASE("fubini on the oscillator point restriction") {
    const HOConfig config(0.08, 0.5, 0.5, 256);
    const BallQuadrature ball = interval_ball_quadrature(0.5, 12);
    const std::vector<double> xs{0.0};
    const DeformedSweep sweep = deformed_sweep(config, ball.nodes, xs, Exec::Serial);
    std::vector<double> per_u(ball.size());
    for (std::size_t m = 0; m < ball.size(); ++m) {
        const double mod = sweep.moduli(static_cast<Eigen::Index>(m), 0);
        per_u[m] = mod * mod;
    }
    double swapped = 0.0;
    for (std::size_t m = 0; m < ball.size(); ++m) swapped += ball.weights[m] * per_u[m];
    CHECK(fubini_check(per_u, ball, swapped) <= 1e-8);
}

TEST_CASE("good set fraction basics") {
    const std::vector<double> w(10, 0.1);
    const std::vector<double> flat(10, 3.0);
    const RestrictionReport rep = good_set_fraction(flat, w, 0.3);
    CHECK(rep.good_fraction == doctest::Approx(1.0));

    // one spike worth ten times the overall mean: kept at omega = 0.05,
    // excluded at omega = 0.2
    std::vector<double> spike(20, 1.0);
    spike[7] = 19.0;
    const std::vector<double> w20(20, 1.0 / 20.0);
    CHECK(good_set_fraction(spike, w20, 0.05).good_fraction == doctest::Approx(1.0));
    CHECK(good_set_fraction(spike, w20, 0.2).good_fraction == doctest::Approx(0.95));

    CHECK_THROWS_AS(good_set_fraction(flat, w, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(good_set_fraction(flat, w, 1.0), std::invalid_argument);
    const std::vector<double> neg{1.0, -0.5};
    const std::vector<double> w2{0.5, 0.5};
    CHECK_THROWS_AS(good_set_fraction(neg, w2, 0.5), std::invalid_argument);
}

TEST_CASE("markov guarantee holds on random arrays") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> usize(0.0, 1.0);
    std::exponential_distribution<double> value(1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(usize(rng) * 200);
        std::vector<double> f(n), w(n);
        for (int i = 0; i < n; ++i) {
            f[i] = value(rng) * (1.0 + 10.0 * usize(rng));
            w[i] = 0.01 + usize(rng);
        }
        const double omega = 0.02 + 0.96 * usize(rng);
        const RestrictionReport rep = good_set_fraction(f, w, omega);
        CHECK(rep.good_fraction >= 1.0 - omega - 1e-12);
    }
}
