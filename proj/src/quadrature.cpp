#include "maglab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace maglab {

namespace {

// Legendre P_n and its derivative at t, by the three-term recurrence.
void legendre_pair(int n, double t, double& p, double& dp) {
    double p0 = 1.0, p1 = t;
    if (n == 0) {
        p = p0;
        dp = 0.0;
        return;
    }
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (t * p1 - p0) / (t * t - 1.0);
}

}  // namespace

IntervalQuadrature gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: a must be < b");

    IntervalQuadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);

    // Newton iteration from the Chebyshev-like initial guess; roots come in
    // symmetric pairs so only the lower half is solved.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = -std::cos(pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, t, p, dp);
            const double step = p / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        legendre_pair(n, t, p, dp);
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        q.nodes[i] = mid + half * t;
        q.weights[i] = half * w;
        q.nodes[n - 1 - i] = mid - half * t;
        q.weights[n - 1 - i] = half * w;
    }
    return q;
}

IntervalQuadrature composite_gauss_legendre(int n_per_panel, std::span<const double> breakpoints) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("composite_gauss_legendre: need at least one panel");
    IntervalQuadrature q;
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        if (!(breakpoints[p] < breakpoints[p + 1]))
            throw std::invalid_argument("composite_gauss_legendre: breakpoints must increase");
        IntervalQuadrature panel = gauss_legendre(n_per_panel, breakpoints[p], breakpoints[p + 1]);
        q.nodes.insert(q.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        q.weights.insert(q.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return q;
}

CircleQuadrature circle_quadrature(int node_count) {
    if (node_count < 1) throw std::invalid_argument("circle_quadrature: node_count must be >= 1");
    CircleQuadrature q;
    q.node_count = node_count;
    q.weight = 2.0 * pi / node_count;
    q.angles.resize(node_count);
    for (int m = 0; m < node_count; ++m) q.angles[m] = q.weight * m;
    return q;
}

BallQuadrature interval_ball_quadrature(double epsilon, int count) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("interval_ball_quadrature: epsilon > 0");
    IntervalQuadrature gl = gauss_legendre(count, -epsilon, epsilon);
    BallQuadrature q;
    q.dimension = 1;
    q.radius = epsilon;
    q.nodes = std::move(gl.nodes);
    q.weights = std::move(gl.weights);
    return q;
}

namespace {

struct AdaptiveState {
    const std::function<cdouble(double)>& f;
    const IntervalQuadrature& rule;  // reference GL rule on [-1, 1]
    double tol_per_unit;
    std::size_t evals = 0;
    std::size_t max_evals;
    cdouble total{0.0, 0.0};

    cdouble panel(double a, double b) {
        evals += rule.size();
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        cdouble s(0.0, 0.0);
        for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weights[i] * f(mid + half * rule.nodes[i]);
        return s * half;
    }

    void refine(double a, double b, cdouble whole, int depth) {
        const double mid = 0.5 * (a + b);
        const cdouble left = panel(a, mid);
        const cdouble right = panel(mid, b);
        const cdouble sum = left + right;
        if (std::abs(sum - whole) <= tol_per_unit * (b - a) || depth >= 48) {
            total += sum;
            return;
        }
        if (evals > max_evals)
            throw resolution_error("adaptive_integrate: evaluation budget exhausted",
                                   std::abs(total + sum));
        refine(a, mid, left, depth + 1);
        refine(mid, b, right, depth + 1);
    }
};

}  // namespace

cdouble adaptive_integrate(const std::function<cdouble(double)>& f, double a, double b,
                           double abs_tol, std::size_t max_evals, int seed_panels) {
    if (!(a < b)) throw std::invalid_argument("adaptive_integrate: a must be < b");
    static const IntervalQuadrature ref = gauss_legendre(15, -1.0, 1.0);
    AdaptiveState st{f, ref, abs_tol / (b - a), 0, max_evals, {0.0, 0.0}};
    const double step = (b - a) / seed_panels;
    for (int p = 0; p < seed_panels; ++p) {
        const double pa = a + p * step, pb = p + 1 == seed_panels ? b : a + (p + 1) * step;
        st.refine(pa, pb, st.panel(pa, pb), 0);
    }
    return st.total;
}

BallQuadrature disk_quadrature(double epsilon, int radial_count, int angular_count) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("disk_quadrature: epsilon > 0");
    if (radial_count < 4 || angular_count < 4)
        throw std::invalid_argument("disk_quadrature: counts must be >= 4");

    IntervalQuadrature radial = gauss_legendre(radial_count, 0.0, epsilon);
    const double wang = 2.0 * pi / angular_count;

    BallQuadrature q;
    q.dimension = 2;
    q.radius = epsilon;
    q.nodes.reserve(2 * static_cast<std::size_t>(radial_count) * angular_count);
    q.weights.reserve(static_cast<std::size_t>(radial_count) * angular_count);
    for (int i = 0; i < radial_count; ++i) {
        const double r = radial.nodes[i];
        const double wr = radial.weights[i] * r;  // polar Jacobian
        for (int m = 0; m < angular_count; ++m) {
            const double a = wang * m;
            q.nodes.push_back(r * std::cos(a));
            q.nodes.push_back(r * std::sin(a));
            q.weights.push_back(wr * wang);
        }
    }
    return q;
}

}  // namespace maglab
