#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maglab/zonal.hpp"

using namespace maglab;

TEST_CASE("legendre recurrence seeds and endpoint identity") {
    CHECK(legendre_pn(0, 0.37) == 1.0);
    CHECK(legendre_pn(1, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
    for (int n : {1, 7, 50, 400}) CHECK(legendre_pn(n, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int n : {2, 16, 128}) CHECK(std::abs(legendre_pn(n, -0.83)) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(legendre_pn(5, 1.5), std::invalid_argument);
}

TEST_CASE("laplace integral equals the recurrence") {
    {
        const CircleQuadrature q = circle_quadrature(64);
        CHECK(zonal_laplace_integral(5, std::acos(0.3), q) ==
              doctest::Approx(legendre_pn(5, 0.3)).epsilon(1e-10));
        CHECK(zonal_laplace_integral(1, pi / 3.0, q) == doctest::Approx(0.5).epsilon(1e-12));
        for (int n : {0, 1, 4, 9}) CHECK(zonal_laplace_integral(n, 0.0, q) == doctest::Approx(1.0));
    }
    {
        const CircleQuadrature q = circle_quadrature(256);
        CHECK(zonal_laplace_integral(50, 0.7, q) ==
              doctest::Approx(legendre_pn(50, std::cos(0.7))).epsilon(1e-10));
    }
    // full consistency sweep up to degree 400
    for (int n : {1, 2, 5, 25, 100, 250, 400}) {
        const CircleQuadrature q = circle_quadrature(std::max(64, 4 * n));
        for (int i = 0; i <= 12; ++i) {
            const double r = pi * i / 12.0;
            const cdouble z = zonal_laplace_integral_complex(n, r, q);
            CHECK(std::abs(z.real() - legendre_pn(n, std::cos(r))) <= 1e-10);
            CHECK(std::abs(z.imag()) <= 1e-12);
        }
    }
}

TEST_CASE("laplace integral rejects under-resolved rules") {
    const CircleQuadrature q = circle_quadrature(64);
    CHECK_THROWS_AS(zonal_laplace_integral(100, 0.3, q), resolution_error);
}

TEST_CASE("pole values scale like hbar^{-1/2}") {
    const std::vector<int> degrees{25, 50, 100, 200, 400};
    const ZonalScaling scaling = zonal_sup_scaling(degrees);
    CHECK(std::abs(scaling.slope + 0.5) <= 0.01);
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const double expected = std::sqrt((2.0 * degrees[i] + 1.0) / (4.0 * pi));
        CHECK(scaling.pole_values[i] == doctest::Approx(expected).epsilon(1e-12));
    }

    // off the pole the normalized values stay O(1) across the list
    std::vector<double> off;
    for (int n : degrees) {
        const double v = std::sqrt((2.0 * n + 1.0) / (4.0 * pi)) * legendre_pn(n, std::cos(1.0));
        off.push_back(std::abs(v));
    }
    for (double v : off) CHECK(v <= 10.0 * off.front());
}

TEST_CASE("surrogate at the pole with no deformation") {
    const ZonalConfig c(100, 0.1, 0.4);
    const CircleQuadrature q = surrogate_circle_quadrature(c, 0.0);
    // at u = x = 0 the phase is constant on the circle
    const double mod = std::abs(deformed_zonal_surrogate(c, {0.0, 0.0}, {0.0, 0.0}, q));
    CHECK(mod == doctest::Approx(std::sqrt(2.0 * pi / c.hbar())).epsilon(1e-12));
}

TEST_CASE("surrogate equals the bessel oracle") {
    for (int n : {120, 320}) {
        const ZonalConfig c(n, 0.1, 0.4);
        const double scale = std::sqrt(2.0 * pi / c.hbar());
        for (const Vec2& u : {Vec2{0.0, 0.0}, Vec2{0.12, -0.08}, Vec2{-0.28, 0.2}}) {
            for (const Vec2& x : {Vec2{0.0, 0.0}, Vec2{0.01, 0.03}}) {
                const CircleQuadrature q = surrogate_circle_quadrature(c, std::hypot(x[0], x[1]));
                const double a = std::abs(deformed_zonal_surrogate(c, u, x, q));
                const double b = bessel_oracle_modulus(c.hbar(), c.t0, u, x);
                CHECK(std::abs(a - b) <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("surrogate is stable under node doubling") {
    const ZonalConfig c(250, 0.1, 0.4);
    const CircleQuadrature q1 = surrogate_circle_quadrature(c, 0.02);
    const CircleQuadrature q2 = circle_quadrature(2 * q1.node_count);
    const Vec2 u{0.15, -0.2}, x{0.01, 0.015};
    const cdouble a = deformed_zonal_surrogate(c, u, x, q1);
    const cdouble b = deformed_zonal_surrogate(c, u, x, q2);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
}

TEST_CASE("surrogate modulus ignores constant phases") {
    const ZonalConfig c(150, 0.1, 0.4);
    const CircleQuadrature q = surrogate_circle_quadrature(c, 0.0);
    const cdouble z = deformed_zonal_surrogate(c, {0.2, 0.1}, {0.0, 0.0}, q);
    const cdouble rotated = z * cdouble(std::cos(0.7), std::sin(0.7));
    CHECK(std::abs(rotated) == doctest::Approx(std::abs(z)).epsilon(1e-15));
}

TEST_CASE("surrogate enforces its resolution rule and domain") {
    const ZonalConfig c(250, 0.1, 0.4);
    const CircleQuadrature coarse = circle_quadrature(64);
    CHECK_THROWS_AS(deformed_zonal_surrogate(c, {0.1, 0.0}, {0.0, 0.0}, coarse),
                    resolution_error);
    const CircleQuadrature q = surrogate_circle_quadrature(c, 0.0);
    CHECK_THROWS_AS(deformed_zonal_surrogate(c, {0.6, 0.0}, {0.0, 0.0}, q),
                    std::invalid_argument);
    CHECK_THROWS_AS(deformed_zonal_surrogate(c, {0.1, 0.0}, {0.4, 0.0}, q),
                    std::invalid_argument);
}

TEST_CASE("bessel j0 from the integral definition") {
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // first zero
    CHECK(std::abs(bessel_j0(2.404825557695773)) <= 1e-10);
    // large-argument envelope
    for (double z = 5.0; z <= 60.0; z += 2.3)
        CHECK(std::abs(bessel_j0(z)) <= 1.1 * std::sqrt(2.0 / (pi * z)));

    const ZonalConfig c(300, 0.1, 0.4);
    CHECK(bessel_oracle_modulus(c.hbar(), c.t0, {0.0, 0.0}, {0.0, 0.0}) ==
          doctest::Approx(std::sqrt(2.0 * pi / c.hbar())).epsilon(1e-12));
    // pick u so that |x - 2 t0 u|/hbar hits the first zero
    const double z0 = 2.404825557695773;
    const double ur = z0 * c.hbar() / (2.0 * c.t0);
    CHECK(bessel_oracle_modulus(c.hbar(), c.t0, {ur, 0.0}, {0.0, 0.0}) <=
          1e-10 * std::sqrt(2.0 * pi / c.hbar()));
}

TEST_CASE("averaging destroys the pole blow-up") {
    const double t0 = 0.1, eps = 0.4;
    const double limit = 2.0 * pi * eps / t0;
    std::vector<double> averaged;
    for (int n : {190, 320}) {
        const ZonalConfig c(n, t0, eps);
        REQUIRE(2.0 * t0 * eps / c.hbar() >= 15.0);
        const BallQuadrature disk = disk_quadrature(eps, 48, 96);
        const double value = averaged_intensity_zonal(c, {0.0, 0.0}, disk, Exec::Parallel);
        averaged.push_back(value);
        CHECK(value / limit >= 0.7);
        CHECK(value / limit <= 1.3);
        // undeformed pole intensity blows up like 1/hbar, the average does not
        CHECK(2.0 * pi / c.hbar() > 3.0 * value);
    }
    CHECK(std::max(averaged[0], averaged[1]) / std::min(averaged[0], averaged[1]) <= 2.0);
}

TEST_CASE("averaged intensity is rotation invariant in x") {
    const ZonalConfig c(150, 0.1, 0.4);
    const BallQuadrature disk = disk_quadrature(0.4, 32, 64);
    const double r = 0.5 * c.epsilon * c.t0;
    std::vector<double> vals;
    for (double ang : {0.0, 1.1, 2.7, 4.4})
        vals.push_back(averaged_intensity_zonal(c, {r * std::cos(ang), r * std::sin(ang)}, disk,
                                                Exec::Parallel));
    for (double v : vals) CHECK(std::abs(v - vals[0]) <= 1e-6 * vals[0]);
}

TEST_CASE("averaged intensity validates its inputs") {
    const ZonalConfig c(150, 0.1, 0.4);
    const BallQuadrature wrong_radius = disk_quadrature(0.3, 16, 16);
    CHECK_THROWS_AS(averaged_intensity_zonal(c, {0.0, 0.0}, wrong_radius), std::invalid_argument);
    const BallQuadrature disk = disk_quadrature(0.4, 16, 16);
    CHECK_THROWS_AS(averaged_intensity_zonal(c, {0.2, 0.0}, disk), std::invalid_argument);
    CHECK_THROWS_AS(averaged_intensity_zonal(c, {0.0, 0.0}, disk, Exec::Serial, 64),
                    resolution_error);
}

TEST_CASE("config invariants") {
    CHECK_THROWS_AS(ZonalConfig(0, 0.1, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(ZonalConfig(100, 0.0, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(ZonalConfig(100, 0.3, 1.0), std::invalid_argument);
    const ZonalConfig c(100, 0.1, 0.4);
    CHECK(c.hbar() == doctest::Approx(1.0 / std::sqrt(100.0 * 101.0)).epsilon(1e-12));
}

TEST_CASE("local sup over the excluded window stays envelope-sized") {
    const double t0 = 0.1, eps = 0.4;
    const double c0 = 2.0 / t0;
    std::vector<double> sups;
    for (int n : {190, 320}) {
        const ZonalConfig c(n, t0, eps);
        const double sup = local_sup_bound_check(c, c0, Exec::Parallel);
        sups.push_back(sup);
        // J0 envelope at the smallest reachable argument
        const double z0 = (t0 * eps - eps / c0) / c.hbar();
        const double envelope =
            std::sqrt(2.0 * pi / c.hbar()) * std::sqrt(2.0 / (pi * z0));
        CHECK(sup <= 1.2 * envelope);
        // far below the undeformed pole scale
        CHECK(sup <= 0.5 * std::sqrt(2.0 * pi / c.hbar()));
    }
    CHECK(std::max(sups[0], sups[1]) / std::min(sups[0], sups[1]) <= 3.0);
    CHECK_THROWS_AS(local_sup_bound_check(ZonalConfig(100, 0.1, 0.4), 2.0), std::invalid_argument);
}
