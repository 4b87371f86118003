#include "maglab/grid.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "maglab/fourier.hpp"

namespace maglab {

UniformGrid::UniformGrid(double lo, double hi, int n, bool per)
    : lower(lo), upper(hi), count(n), periodic(per) {
    if (count < 8) throw std::invalid_argument("UniformGrid: count must be >= 8");
    if (!(upper > lower)) throw std::invalid_argument("UniformGrid: upper must exceed lower");
}

double UniformGrid::momentum(int k, double hbar) const {
    if (!periodic) throw std::invalid_argument("momentum lattice requires a periodic grid");
    const int s = k < (count + 1) / 2 ? k : k - count;
    return 2.0 * pi * hbar * s / length();
}

double UniformGrid::momentum_max(double hbar) const {
    return 2.0 * pi * hbar * (count / 2) / length();
}

WaveField::WaveField(UniformGrid g, double hb)
    : grid(g), values(static_cast<std::size_t>(g.count)), hbar(hb) {
    if (!(hbar > 0.0)) throw std::invalid_argument("WaveField: hbar must be positive");
}

WaveField::WaveField(UniformGrid g, std::vector<cdouble> v, double hb)
    : grid(g), values(std::move(v)), hbar(hb) {
    if (!(hbar > 0.0)) throw std::invalid_argument("WaveField: hbar must be positive");
    if (values.size() != static_cast<std::size_t>(grid.count))
        throw std::invalid_argument("WaveField: values length must equal grid count");
}

double WaveField::l2_norm() const {
    double s = 0.0;
    for (const cdouble& v : values) s += std::norm(v);
    return std::sqrt(s * grid.spacing());
}

double WaveField::boundary_mass_fraction(double band) const {
    double total = 0.0, near = 0.0;
    for (int j = 0; j < grid.count; ++j) {
        const double m = std::norm(values[j]);
        total += m;
        const double d = std::min(grid.point(j) - grid.lower, grid.upper - grid.point(j));
        if (d < band) near += m;
    }
    return total > 0.0 ? near / total : 0.0;
}

cdouble WaveField::interp(double x) const {
    return TrigInterpolator(grid, values)(x);
}

WaveField WaveField::shifted_by_cells(int cells) const {
    WaveField out(grid, hbar);
    const int n = grid.count;
    const int s = ((cells % n) + n) % n;
    for (int j = 0; j < n; ++j) out.values[j] = values[(j + s) % n];
    return out;
}

}  // namespace maglab
