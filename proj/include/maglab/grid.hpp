#pragma once

#include <span>
#include <vector>

#include "maglab/common.hpp"

namespace maglab {

/// Uniform 1-D sampling of an interval. Periodic grids sample [lower, upper)
/// with spacing (upper-lower)/count; open grids include both endpoints.
struct UniformGrid {
    double lower = 0.0;
    double upper = 1.0;
    int count = 8;
    bool periodic = true;

    UniformGrid(double lo, double hi, int n, bool per);

    double length() const { return upper - lower; }
    double spacing() const {
        return periodic ? length() / count : length() / (count - 1);
    }
    double point(int i) const { return lower + i * spacing(); }

    /// Signed momentum-lattice frequency for FFT-order index k (periodic grids):
    /// eta_k = 2*pi*hbar*s(k)/length with s(k) = k for k < count/2, k-count after.
    double momentum(int k, double hbar) const;
    /// Largest |eta| on the lattice.
    double momentum_max(double hbar) const;
};

struct WaveField {
    UniformGrid grid;
    std::vector<cdouble> values;
    double hbar = 1.0;

    WaveField(UniformGrid g, double hb);
    WaveField(UniformGrid g, std::vector<cdouble> v, double hb);

    /// sqrt(dy * sum |v_j|^2), the grid realization of the L2 norm.
    double l2_norm() const;

    /// Fraction of the squared norm lying within `band` of the periodic seam.
    double boundary_mass_fraction(double band) const;

    /// Trigonometric (band-limited) interpolation at an arbitrary point.
    /// Exact at grid points; periodic continuation elsewhere.
    cdouble interp(double x) const;

    /// Circular shift by an integer number of cells: result(y) = (*this)(y + s*dy).
    WaveField shifted_by_cells(int cells) const;
};

}  // namespace maglab
