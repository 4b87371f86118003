#pragma once

namespace maglab {

/// Smooth radial cutoff: 1 on [0, inner_radius], 0 on [outer_radius, inf),
/// blended in between by f(outer-t) / (f(outer-t) + f(t-inner)) with
/// f(s) = exp(-1/s) for s > 0 and 0 otherwise.
struct CutoffProfile {
    double inner_radius = 1.0;
    double outer_radius = 2.0;

    CutoffProfile(double inner, double outer);
};

double chi_eval(const CutoffProfile& profile, double t);

}  // namespace maglab
