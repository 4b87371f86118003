#pragma once

#include <array>
#include <span>
#include <vector>

#include "maglab/common.hpp"
#include "maglab/quadrature.hpp"

namespace maglab {

/// Zonal-harmonic surrogate parameters: degree n fixes hbar = (n(n+1))^{-1/2};
/// the deformation lives in the small-t0, small-|x| regime t0*epsilon <= 0.2.
struct ZonalConfig {
    int degree;
    double t0;
    double epsilon;

    ZonalConfig(int degree_, double t0_, double epsilon_);

    double hbar() const;
    /// L2 normalization factor sqrt((2n+1)/4 pi) of the degree-n zonal harmonic.
    double normalization() const;
};

/// Legendre polynomial by the three-term recurrence, |t| <= 1.
double legendre_pn(int n, double t);

/// (1/2pi) int_{-pi}^{pi} (cos r + i sin r cos tau)^n dtau, real part.
/// The integrand is a trigonometric polynomial of degree n, so the equispaced
/// rule is exact once node_count >= 4n (enforced).
double zonal_laplace_integral(int n, double r, const CircleQuadrature& quad);
cdouble zonal_laplace_integral_complex(int n, double r, const CircleQuadrature& quad);

struct ZonalScaling {
    std::vector<double> hbars;
    std::vector<double> pole_values;  // sqrt((2n+1)/4pi) P_n(1)
    double slope;                     // log pole value vs log hbar
};

ZonalScaling zonal_sup_scaling(std::span<const int> degrees);

using Vec2 = std::array<double, 2>;

/// (2 pi hbar)^{-1/2} sum w_m exp(i [<x, w_m> - t0 |w_m + u|^2]/hbar) over unit
/// circle directions, unit amplitude. Node count must resolve the oscillation:
/// at least 20 (|x| + 2 t0 (1 + epsilon))/hbar nodes.
cdouble deformed_zonal_surrogate(const ZonalConfig& config, Vec2 u, Vec2 x,
                                 const CircleQuadrature& quad);

/// Circle quadrature satisfying the surrogate's resolution rule with margin.
CircleQuadrature surrogate_circle_quadrature(const ZonalConfig& config, double x_norm);

/// J_0 from its integral definition (1/pi) int_0^pi cos(z sin a) da, resolved
/// equispaced quadrature.
double bessel_j0(double z);

/// Closed form of the surrogate modulus, sqrt(2 pi / hbar) |J0(|x - 2 t0 u|/hbar)|:
/// expanding |w + u|^2 = 1 + 2<w, u> + |u|^2 leaves unimodular factors times
/// int_{S^1} e^{i <x - 2 t0 u, w>/hbar} dw = 2 pi J0(|x - 2 t0 u|/hbar).
double bessel_oracle_modulus(double hbar, double t0, Vec2 u, Vec2 x);

/// sum_m w_m |Z^(u_m)(x)|^2 over the disk quadrature (radius epsilon).
/// circle_count = 0 sizes the surrogate quadrature automatically; an explicit
/// under-resolved count raises resolution_error.
double averaged_intensity_zonal(const ZonalConfig& config, Vec2 x, const BallQuadrature& disk,
                                Exec exec = Exec::Serial, int circle_count = 0);

/// sup of the surrogate modulus over |x| <= epsilon/c0, epsilon/2 <= |u| <= epsilon
/// (polar sample grids dense enough to land near the Bessel crests). The bound
/// is only meaningful for c0 > 1/t0, where the deformed peak cannot reenter
/// the x-window.
double local_sup_bound_check(const ZonalConfig& config, double c0, Exec exec = Exec::Serial);

}  // namespace maglab
