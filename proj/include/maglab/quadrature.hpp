#pragma once

#include <functional>
#include <span>
#include <vector>

#include "maglab/common.hpp"

namespace maglab {

struct IntervalQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// Gauss-Legendre rule on [a,b], exact for polynomials of degree <= 2n-1.
IntervalQuadrature gauss_legendre(int n, double a, double b);

/// Gauss-Legendre applied per panel; breakpoints must be strictly increasing.
/// Used where the integrand is smooth per panel but only C^inf globally.
IntervalQuadrature composite_gauss_legendre(int n_per_panel, std::span<const double> breakpoints);

/// Equispaced angles on [0, 2pi) with uniform weight 2pi/node_count; exact for
/// trigonometric polynomials of degree < node_count.
struct CircleQuadrature {
    int node_count = 0;
    std::vector<double> angles;
    double weight = 0.0;

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (double a : angles) s += f(a);
        return s * weight;
    }
};

CircleQuadrature circle_quadrature(int node_count);

/// Nodes and weights for integration over the k-ball of radius `radius`.
/// Node i occupies nodes[i*dimension .. (i+1)*dimension).
struct BallQuadrature {
    int dimension = 1;
    double radius = 1.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> node(std::size_t i) const {
        return {nodes.data() + i * dimension, static_cast<std::size_t>(dimension)};
    }
};

/// k = 1 ball: Gauss-Legendre on [-epsilon, epsilon].
BallQuadrature interval_ball_quadrature(double epsilon, int count);

/// k = 2 ball: polar product rule, Gauss-Legendre radially (Jacobian r folded
/// into the weights) and equispaced angularly. Weights sum to pi*epsilon^2.
BallQuadrature disk_quadrature(double epsilon, int radial_count, int angular_count);

/// Adaptive panel-halving Gauss-Legendre quadrature of a complex integrand.
/// Panels are accepted when the whole-panel estimate agrees with the sum of
/// the half-panel estimates to the panel's share of abs_tol. Throws
/// resolution_error (carrying the best estimate) past max_evals evaluations.
cdouble adaptive_integrate(const std::function<cdouble(double)>& f, double a, double b,
                           double abs_tol, std::size_t max_evals = 4000000,
                           int seed_panels = 32);

}  // namespace maglab
