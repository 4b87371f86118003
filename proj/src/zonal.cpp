#include "maglab/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maglab {

ZonalConfig::ZonalConfig(int degree_, double t0_, double epsilon_)
    : degree(degree_), t0(t0_), epsilon(epsilon_) {
    if (degree < 1) throw std::invalid_argument("ZonalConfig: degree must be >= 1");
    if (!(t0 > 0.0) || t0 > 0.5) throw std::invalid_argument("ZonalConfig: t0 must lie in (0, 0.5]");
    if (!(epsilon > 0.0)) throw std::invalid_argument("ZonalConfig: epsilon must be positive");
    if (t0 * epsilon > 0.2)
        throw std::invalid_argument("ZonalConfig: t0 * epsilon must stay <= 0.2");
}

double ZonalConfig::hbar() const {
    return 1.0 / std::sqrt(static_cast<double>(degree) * (degree + 1.0));
}

double ZonalConfig::normalization() const {
    return std::sqrt((2.0 * degree + 1.0) / (4.0 * pi));
}

double legendre_pn(int n, double t) {
    if (n < 0) throw std::invalid_argument("legendre_pn: n must be >= 0");
    if (std::abs(t) > 1.0) throw std::invalid_argument("legendre_pn: |t| must be <= 1");
    double p0 = 1.0;
    if (n == 0) return p0;
    double p1 = t;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

cdouble zonal_laplace_integral_complex(int n, double r, const CircleQuadrature& quad) {
    if (r < 0.0 || r > pi) throw std::invalid_argument("zonal_laplace_integral: r in [0, pi]");
    if (quad.node_count < 4 * n)
        throw resolution_error("zonal_laplace_integral: need node_count >= 4n", 0.0);

    const double cr = std::cos(r), sr = std::sin(r);
    cdouble acc(0.0, 0.0);
    for (double a : quad.angles) {
        cdouble base(cr, sr * std::cos(a));
        // binary exponentiation; |base| <= 1 so this is stable
        cdouble pw(1.0, 0.0);
        int e = n;
        while (e > 0) {
            if (e & 1) pw *= base;
            base *= base;
            e >>= 1;
        }
        acc += pw;
    }
    return acc * (quad.weight / (2.0 * pi));
}

double zonal_laplace_integral(int n, double r, const CircleQuadrature& quad) {
    return zonal_laplace_integral_complex(n, r, quad).real();
}

ZonalScaling zonal_sup_scaling(std::span<const int> degrees) {
    if (degrees.size() < 2) throw std::invalid_argument("zonal_sup_scaling: need >= 2 degrees");
    const double span = static_cast<double>(degrees.back()) / degrees.front();
    if (span < 10.0 && span > 0.1)
        throw std::invalid_argument("zonal_sup_scaling: degree list must span a decade");

    ZonalScaling out;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int n : degrees) {
        const double hbar = 1.0 / std::sqrt(static_cast<double>(n) * (n + 1.0));
        const double value = std::sqrt((2.0 * n + 1.0) / (4.0 * pi)) * legendre_pn(n, 1.0);
        out.hbars.push_back(hbar);
        out.pole_values.push_back(value);
        const double lx = std::log(hbar), ly = std::log(value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(degrees.size());
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

cdouble deformed_zonal_surrogate(const ZonalConfig& config, Vec2 u, Vec2 x,
                                 const CircleQuadrature& quad) {
    const double xn = std::hypot(x[0], x[1]);
    const double un = std::hypot(u[0], u[1]);
    if (xn > 0.3) throw std::invalid_argument("deformed_zonal_surrogate: |x| must be <= 0.3");
    if (un > config.epsilon * (1.0 + 1e-12))
        throw std::invalid_argument("deformed_zonal_surrogate: |u| must be <= epsilon");

    const double hbar = config.hbar();
    const double needed = 20.0 * (xn + 2.0 * config.t0 * (1.0 + config.epsilon)) / hbar;
    if (quad.node_count < needed)
        throw resolution_error("deformed_zonal_surrogate: circle quadrature under-resolved",
                               needed);

    const double t0 = config.t0;
    cdouble acc(0.0, 0.0);
    for (double a : quad.angles) {
        const double w1 = std::cos(a), w2 = std::sin(a);
        const double d1 = w1 + u[0], d2 = w2 + u[1];
        const double phase = (x[0] * w1 + x[1] * w2 - t0 * (d1 * d1 + d2 * d2)) / hbar;
        acc += cdouble(std::cos(phase), std::sin(phase));
    }
    return acc * quad.weight / std::sqrt(2.0 * pi * hbar);
}

CircleQuadrature surrogate_circle_quadrature(const ZonalConfig& config, double x_norm) {
    const double needed =
        20.0 * (x_norm + 2.0 * config.t0 * (1.0 + config.epsilon)) / config.hbar();
    const int count = std::max(256, static_cast<int>(std::ceil(1.5 * needed)));
    return circle_quadrature(count);
}

double bessel_j0(double z) {
    z = std::abs(z);
    // cos(z sin a) extends to a smooth periodic function, so the equispaced
    // rule converges spectrally once it resolves ~z oscillations.
    const int m = 64 + 4 * static_cast<int>(std::ceil(z));
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = pi * (i + 0.5) / m;
        acc += std::cos(z * std::sin(a));
    }
    return acc / m;
}

double bessel_oracle_modulus(double hbar, double t0, Vec2 u, Vec2 x) {
    const double w1 = x[0] - 2.0 * t0 * u[0];
    const double w2 = x[1] - 2.0 * t0 * u[1];
    const double z = std::hypot(w1, w2) / hbar;
    return std::sqrt(2.0 * pi / hbar) * std::abs(bessel_j0(z));
}

double averaged_intensity_zonal(const ZonalConfig& config, Vec2 x, const BallQuadrature& disk,
                                Exec exec, int circle_count) {
    if (disk.dimension != 2)
        throw std::invalid_argument("averaged_intensity_zonal: disk quadrature must be 2-D");
    if (std::abs(disk.radius - config.epsilon) > 1e-12 * std::max(1.0, config.epsilon))
        throw std::invalid_argument("averaged_intensity_zonal: disk radius must equal epsilon");
    const double xn = std::hypot(x[0], x[1]);
    if (xn > config.epsilon * config.t0 * (1.0 + 1e-12))
        throw std::invalid_argument("averaged_intensity_zonal: x must stay in the pole window");

    const CircleQuadrature quad = circle_count > 0 ? circle_quadrature(circle_count)
                                                   : surrogate_circle_quadrature(config, xn);
    std::vector<double> terms(disk.size(), 0.0);
    par_for(exec, disk.size(), [&](std::size_t m) {
        const auto node = disk.node(m);
        const double mod =
            std::abs(deformed_zonal_surrogate(config, Vec2{node[0], node[1]}, x, quad));
        terms[m] = disk.weights[m] * mod * mod;
    });
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

double local_sup_bound_check(const ZonalConfig& config, double c0, Exec exec) {
    if (c0 < 4.0) throw std::invalid_argument("local_sup_bound_check: c0 must be >= 4");
    const double xmax = config.epsilon / c0;
    const CircleQuadrature quad = surrogate_circle_quadrature(config, xmax);

    // |u| resolution fine enough that |x - 2 t0 u|/hbar lands near a Bessel
    // crest somewhere in the sample set
    const int nx = 4, nxa = 8, nu = 24, na = 16;
    std::vector<Vec2> xs, us;
    xs.push_back({0.0, 0.0});
    for (int ix = 1; ix < nx; ++ix) {
        const double xr = xmax * ix / (nx - 1);
        for (int ia = 0; ia < nxa; ++ia) {
            const double ang = 2.0 * pi * ia / nxa;
            xs.push_back({xr * std::cos(ang), xr * std::sin(ang)});
        }
    }
    for (int iu = 0; iu < nu; ++iu) {
        const double ur = config.epsilon * (0.5 + 0.5 * iu / (nu - 1));
        for (int ja = 0; ja < na; ++ja) {
            const double ang = 2.0 * pi * ja / na;
            us.push_back({ur * std::cos(ang), ur * std::sin(ang)});
        }
    }

    std::vector<double> sups(us.size(), 0.0);
    par_for(exec, us.size(), [&](std::size_t i) {
        double s = 0.0;
        for (const Vec2& x : xs)
            s = std::max(s, std::abs(deformed_zonal_surrogate(config, us[i], x, quad)));
        sups[i] = s;
    });
    double sup = 0.0;
    for (double s : sups) sup = std::max(sup, s);
    return sup;
}

}  // namespace maglab
