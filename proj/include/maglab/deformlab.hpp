#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "maglab/common.hpp"
#include "maglab/quadrature.hpp"

namespace maglab {

/// k-parameter family of magnetic one-forms through its local components
/// omega_j(x, u), j = 1..n. The zero parameter must give the zero form.
struct MagneticFamily {
    int space_dim = 1;
    int param_dim = 1;
    std::function<std::vector<double>(std::span<const double> x, std::span<const double> u)>
        components;
    /// Optional analytic Jacobian d omega / d u (n x k); checked against the
    /// finite-difference one when present.
    std::function<Eigen::MatrixXd(std::span<const double> x, std::span<const double> u)> jacobian;
};

/// Central-difference Jacobian d omega_i / d u_j, step in [1e-7, 1e-3]. When
/// the family carries an analytic Jacobian the two must agree to 10 step^2
/// relative, otherwise an inconsistent_family_error is raised.
Eigen::MatrixXd jacobian_du(const MagneticFamily& family, std::span<const double> x,
                            std::span<const double> u, double step = 1e-5);

struct AdmissibilityReport {
    double min_singular_value = 0.0;
    std::vector<double> worst_x;
    std::vector<double> worst_u;
    std::vector<int> chosen_subset;  // n parameter indices, max |det| at the worst point
    double threshold = 0.0;
    bool admissible = false;
};

/// Scans the sample sets for the smallest singular value of the first
/// variation; the chart-wise parameter subset is the |det|-maximizing n-tuple
/// at the worst point, ties broken toward the lexicographically smallest.
AdmissibilityReport admissibility_check(const MagneticFamily& family,
                                        std::span<const std::vector<double>> x_samples,
                                        std::span<const std::vector<double>> u_samples,
                                        double c0 = 1e-3);

/// sum_m w_m intensity(u_m); rejects non-finite evaluations naming the node.
double average_over_ball(const std::function<double(std::span<const double>)>& intensity,
                         const BallQuadrature& quad);

struct AverageProfile {
    double hbar = 0.0;
    std::vector<double> x_samples;
    std::vector<double> values;
};

struct BandSummary {
    double c1 = 0.0;  // min over all (hbar, x)
    double c2 = 0.0;  // max
    double ratio = 0.0;
};

/// Two-sided band over an hbar sweep of profiles; any vanishing value makes
/// the band degenerate and is rejected.
BandSummary two_sided_band(std::span<const AverageProfile> profiles, double declared_bound = 2.0);

/// Parametrized curve on [0,1] carrying its own measure: point(t), the metric
/// length element speed(t) > 0, and the quadrature in t.
struct Curve {
    std::function<std::array<double, 2>(double)> point;
    std::function<double(double)> speed;
    IntervalQuadrature quadrature;
};

Curve segment_curve(std::array<double, 2> a, std::array<double, 2> b, int quad_count);
/// Degenerate one-point "curve" carrying counting measure.
Curve point_curve(std::array<double, 2> location);

/// sum_j w_j |state(point(t_j))|^2 speed(t_j). If max_phase_rate > 0 (radians
/// per unit length), consecutive curve nodes must be closer than
/// 1/(4 max_phase_rate), else a resolution_error carrying the coarse value.
double restriction_integral(const std::function<cdouble(std::array<double, 2>)>& state,
                            const Curve& curve, double max_phase_rate = 0.0);

/// |sum_m w_m per_u[m] - swapped|; throws order_swap_error beyond
/// 1e-8 max(1, |swapped|).
double fubini_check(std::span<const double> per_u, const BallQuadrature& quad, double swapped);

struct RestrictionReport {
    std::vector<double> per_u_values;
    double iterated_value = 0.0;
    double omega = 0.0;
    double threshold = 0.0;
    double good_fraction = 0.0;
};

/// Chebyshev/Markov construction of the good set {u : F(u) <= mean/Omega};
/// the returned fraction is guaranteed >= 1 - Omega.
RestrictionReport good_set_fraction(std::span<const double> per_u,
                                    std::span<const double> weights, double omega);

}  // namespace maglab
