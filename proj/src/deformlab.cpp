#include "maglab/deformlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace maglab {

Eigen::MatrixXd jacobian_du(const MagneticFamily& family, std::span<const double> x,
                            std::span<const double> u, double step) {
    if (!(step >= 1e-7 && step <= 1e-3))
        throw std::invalid_argument("jacobian_du: step must lie in [1e-7, 1e-3]");
    if (static_cast<int>(x.size()) != family.space_dim ||
        static_cast<int>(u.size()) != family.param_dim)
        throw std::invalid_argument("jacobian_du: dimension mismatch");

    const int n = family.space_dim, k = family.param_dim;
    Eigen::MatrixXd jac(n, k);
    std::vector<double> up(u.begin(), u.end()), um(u.begin(), u.end());
    for (int j = 0; j < k; ++j) {
        up[j] = u[j] + step;
        um[j] = u[j] - step;
        const std::vector<double> fp = family.components(x, up);
        const std::vector<double> fm = family.components(x, um);
        if (static_cast<int>(fp.size()) != n || static_cast<int>(fm.size()) != n)
            throw std::invalid_argument("jacobian_du: family returned wrong component count");
        for (int i = 0; i < n; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * step);
        up[j] = u[j];
        um[j] = u[j];
    }

    if (family.jacobian) {
        const Eigen::MatrixXd analytic = family.jacobian(x, u);
        const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
        const double defect = (jac - analytic).cwiseAbs().maxCoeff();
        if (defect > 10.0 * step * step * scale)
            throw inconsistent_family_error(
                "jacobian_du: finite differences disagree with the declared Jacobian");
    }
    return jac;
}

namespace {

// Subsets of {0..k-1} of size n in lexicographic order.
bool next_subset(std::vector<int>& idx, int k) {
    const int n = static_cast<int>(idx.size());
    for (int i = n - 1; i >= 0; --i) {
        if (idx[i] < k - (n - i)) {
            ++idx[i];
            for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

AdmissibilityReport admissibility_check(const MagneticFamily& family,
                                        std::span<const std::vector<double>> x_samples,
                                        std::span<const std::vector<double>> u_samples,
                                        double c0) {
    if (x_samples.empty() || u_samples.empty())
        throw std::invalid_argument("admissibility_check: sample sets must be nonempty");
    const int n = family.space_dim, k = family.param_dim;
    if (k < n) throw std::invalid_argument("admissibility_check: need param_dim >= space_dim");

    AdmissibilityReport report;
    report.threshold = c0;
    report.min_singular_value = std::numeric_limits<double>::max();

    const std::vector<double> zero(k, 0.0);
    Eigen::MatrixXd worst_jac;
    for (const std::vector<double>& x : x_samples) {
        const std::vector<double> at_zero = family.components(x, zero);
        for (double w : at_zero)
            if (std::abs(w) > 1e-12)
                throw std::invalid_argument("admissibility_check: family violates omega_0 = 0");

        for (const std::vector<double>& u : u_samples) {
            const Eigen::MatrixXd jac = jacobian_du(family, x, u);
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
            const double sigma = svd.singularValues()(n - 1);
            if (sigma < report.min_singular_value) {
                report.min_singular_value = sigma;
                report.worst_x = x;
                report.worst_u = u;
                worst_jac = jac;
            }
        }
    }

    // chart-wise parameter subset at the worst point: n columns maximizing
    // |det|, lexicographically smallest among ties
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    double best = -1.0;
    Eigen::MatrixXd sub(n, n);
    do {
        for (int c = 0; c < n; ++c) sub.col(c) = worst_jac.col(idx[c]);
        const double det = std::abs(sub.determinant());
        if (det > best + 1e-12 * std::max(1.0, best)) {
            best = det;
            report.chosen_subset = idx;
        }
    } while (next_subset(idx, k));

    report.admissible = c0 > 0.0 && report.min_singular_value >= c0;
    return report;
}

double average_over_ball(const std::function<double(std::span<const double>)>& intensity,
                         const BallQuadrature& quad) {
    double acc = 0.0;
    for (std::size_t m = 0; m < quad.size(); ++m) {
        const double v = intensity(quad.node(m));
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "average_over_ball: non-finite intensity at node " << m;
            throw numeric_error(msg.str());
        }
        acc += quad.weights[m] * v;
    }
    return acc;
}

BandSummary two_sided_band(std::span<const AverageProfile> profiles, double declared_bound) {
    if (profiles.size() < 3) throw std::invalid_argument("two_sided_band: need >= 3 profiles");
    BandSummary band;
    band.c1 = std::numeric_limits<double>::max();
    band.c2 = 0.0;
    for (const AverageProfile& p : profiles) {
        for (double v : p.values) {
            if (!(v > 0.0))
                throw degenerate_band_error("two_sided_band: profile contains a vanishing value");
            band.c1 = std::min(band.c1, v);
            band.c2 = std::max(band.c2, v);
        }
    }
    band.ratio = band.c2 / band.c1;
    (void)declared_bound;
    return band;
}

Curve segment_curve(std::array<double, 2> a, std::array<double, 2> b, int quad_count) {
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    Curve c;
    c.point = [a, b](double t) {
        return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };
    c.speed = [len](double) { return len; };
    c.quadrature = gauss_legendre(quad_count, 0.0, 1.0);
    return c;
}

Curve point_curve(std::array<double, 2> location) {
    Curve c;
    c.point = [location](double) { return location; };
    c.speed = [](double) { return 1.0; };
    c.quadrature.nodes = {0.0};
    c.quadrature.weights = {1.0};
    return c;
}

double restriction_integral(const std::function<cdouble(std::array<double, 2>)>& state,
                            const Curve& curve, double max_phase_rate) {
    const IntervalQuadrature& q = curve.quadrature;
    if (q.size() == 0) throw std::invalid_argument("restriction_integral: empty curve quadrature");

    double value = 0.0;
    double max_spacing = 0.0;
    std::array<double, 2> prev{};
    for (std::size_t j = 0; j < q.size(); ++j) {
        const std::array<double, 2> p = curve.point(q.nodes[j]);
        if (j > 0) max_spacing = std::max(max_spacing, std::hypot(p[0] - prev[0], p[1] - prev[1]));
        prev = p;
        const double mod = std::abs(state(p));
        value += q.weights[j] * mod * mod * curve.speed(q.nodes[j]);
    }
    if (max_phase_rate > 0.0 && q.size() > 1 && max_spacing > 0.25 / max_phase_rate)
        throw resolution_error("restriction_integral: curve quadrature under-resolved", value);
    return value;
}

double fubini_check(std::span<const double> per_u, const BallQuadrature& quad, double swapped) {
    if (per_u.size() != quad.size())
        throw std::invalid_argument("fubini_check: per-u values must match the quadrature");
    double iterated = 0.0;
    for (std::size_t m = 0; m < per_u.size(); ++m) iterated += quad.weights[m] * per_u[m];
    const double gap = std::abs(iterated - swapped);
    if (gap > 1e-8 * std::max(1.0, std::abs(swapped)))
        throw order_swap_error("fubini_check: iterated integrals disagree beyond reassociation");
    return gap;
}

RestrictionReport good_set_fraction(std::span<const double> per_u,
                                    std::span<const double> weights, double omega) {
    if (per_u.size() != weights.size())
        throw std::invalid_argument("good_set_fraction: length mismatch");
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("good_set_fraction: omega must lie in (0, 1)");

    RestrictionReport report;
    report.per_u_values.assign(per_u.begin(), per_u.end());
    report.omega = omega;

    double total = 0.0;
    for (std::size_t m = 0; m < per_u.size(); ++m) {
        if (per_u[m] < 0.0)
            throw std::invalid_argument("good_set_fraction: values must be nonnegative");
        report.iterated_value += weights[m] * per_u[m];
        total += weights[m];
    }
    const double mean = total > 0.0 ? report.iterated_value / total : 0.0;
    report.threshold = mean / omega;

    double good = 0.0;
    for (std::size_t m = 0; m < per_u.size(); ++m)
        if (per_u[m] <= report.threshold) good += weights[m];
    report.good_fraction = total > 0.0 ? good / total : 1.0;
    return report;
}

}  // namespace maglab
