#include "maglab/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace maglab {

namespace {
double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}

CutoffProfile::CutoffProfile(double inner, double outer)
    : inner_radius(inner), outer_radius(outer) {
    if (!(inner > 0.0) || !(outer > inner))
        throw std::invalid_argument("CutoffProfile: need 0 < inner < outer");
}

double chi_eval(const CutoffProfile& profile, double t) {
    if (t <= profile.inner_radius) return 1.0;
    if (t >= profile.outer_radius) return 0.0;
    const double a = bump(profile.outer_radius - t);
    const double b = bump(t - profile.inner_radius);
    return a / (a + b);
}

}  // namespace maglab
