#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "maglab/common.hpp"
#include "maglab/cutoff.hpp"
#include "maglab/grid.hpp"
#include "maglab/quadrature.hpp"

namespace maglab {

using Vec2 = std::array<double, 2>;

/// Normalized Gaussian (pi hbar)^{-1/4} e^{-y^2/2 hbar} on a periodic grid.
WaveField flat_gaussian(const UniformGrid& grid, double hbar);

/// Exact constant-field magnetic propagation e^{(i/2 hbar) <hbar D + u, hbar D + u>}
/// as a Fourier multiplier e^{(i/2 hbar)(eta + u)^2} on the momentum lattice.
/// Requires the state mass within 4 sqrt(hbar) of the periodic seam to be
/// below 1e-10 of the total.
WaveField flat_magnetic_propagate(const WaveField& state, double u);

/// sum_m w_m chi(|u_m|) |f^(u_m)(x)|^2 over the supplied u quadrature, which
/// must cover the chi support.
double averaged_intensity_flat(const WaveField& state, double x, const CutoffProfile& chi,
                               const IntervalQuadrature& u_quad, Exec exec = Exec::Serial);

/// Dense Weyl quantization of the symbol a(y, xi) = chi(y - xi) against the
/// grid's discrete momentum set. Applies to sampled values; Hermitian for the
/// real symbol; the chi == 1 limit is the identity matrix.
struct WeylMatrix {
    Eigen::MatrixXcd matrix;
    CutoffProfile symbol;
    double hbar;
    UniformGrid grid;
};

WeylMatrix weyl_quantize_chi(const UniformGrid& grid, double hbar, const CutoffProfile& chi);

/// <W g, g> with the grid quadrature weight.
cdouble weyl_expectation(const WeylMatrix& op, std::span<const cdouble> g);

struct MotivationIdentity {
    double lhs;  // averaged chi-weighted intensity at x
    double rhs;  // <Op^w(chi(y - xi)) g_x, g_x>, g_x(y) = f(x + y)
    double gap;
};

/// Brute-force check of the averaged-intensity / Weyl-quantization identity.
/// x must lie on the grid lattice (the translation is a cyclic shift).
MotivationIdentity motivation_identity_check(const WaveField& state, double x,
                                             const CutoffProfile& chi,
                                             int panel_order = 64);

// ---- 2-D tensor-grid variant (restriction experiment) ----

struct FlatState2D {
    UniformGrid grid;  // same axis in both directions
    std::vector<cdouble> values;  // row-major, index j1 * count + j2
    double hbar;
};

FlatState2D flat_gaussian_2d(const UniformGrid& grid, double hbar);

/// Evaluates magnetic deformations of a fixed 2-D state along arbitrary point
/// sets. The base 2-D FFT is taken once at construction; each u applies the
/// unimodular multiplier in coefficient space.
class Flat2DDeformedEvaluator {
public:
    explicit Flat2DDeformedEvaluator(const FlatState2D& base);

    std::vector<cdouble> eval(Vec2 u, std::span<const Vec2> points) const;

    /// Largest momentum magnitude carrying at least `mass_tol` of the state,
    /// plus |u|; bounds the local wavenumber of the deformed state.
    double wavenumber_bound(Vec2 u, double mass_tol = 1e-12) const;

private:
    UniformGrid grid_;
    double hbar_;
    std::vector<cdouble> coeffs_;  // unitary 2-D FFT of the base values
};

}  // namespace maglab
