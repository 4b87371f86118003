#include "maglab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "maglab/cutoff.hpp"
#include "maglab/deformlab.hpp"
#include "maglab/flatmag.hpp"
#include "maglab/fourier.hpp"
#include "maglab/oscillator.hpp"
#include "maglab/zonal.hpp"

namespace maglab {

using json = nlohmann::ordered_json;

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::FlatAverage: return "flat-average";
        case ExperimentKind::HoAverage: return "ho-average";
        case ExperimentKind::ZonalAverage: return "zonal-average";
        case ExperimentKind::Restriction: return "restriction";
        case ExperimentKind::Admissibility: return "admissibility";
        case ExperimentKind::SupScaling: return "sup-scaling";
    }
    return "unknown";
}

std::optional<ExperimentKind> experiment_from_name(const std::string& name) {
    static const std::map<std::string, ExperimentKind> table = {
        {"flat-average", ExperimentKind::FlatAverage},
        {"ho-average", ExperimentKind::HoAverage},
        {"zonal-average", ExperimentKind::ZonalAverage},
        {"restriction", ExperimentKind::Restriction},
        {"admissibility", ExperimentKind::Admissibility},
        {"sup-scaling", ExperimentKind::SupScaling},
    };
    const auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: cannot parse number for '" + key + "': " + s);
    }
}

int parse_int(const std::string& key, const std::string& s) {
    const double v = parse_double(key, s);
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-12) throw config_error("config: '" + key + "' must be an integer");
    return i;
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw config_error("config: '" + key + "' must be a boolean");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const std::string& p : split_csv(s)) out.push_back(parse_double(key, p));
    return out;
}

void validate(const ExperimentConfig& c) {
    const bool zonal = c.experiment == ExperimentKind::ZonalAverage;
    if (zonal) {
        if (c.degree_list.empty()) throw config_error("config: zonal-average needs degree_list");
        for (std::size_t i = 0; i + 1 < c.degree_list.size(); ++i)
            if (c.degree_list[i] >= c.degree_list[i + 1])
                throw config_error("config: degree_list must be strictly increasing");
        if (c.degree_list.front() < 1) throw config_error("config: degrees must be >= 1");
        if (!(c.t0 > 0.0) || c.t0 > 0.5)
            throw config_error("config: zonal t0 must lie in (0, 0.5]");
        if (c.t0 * c.epsilon > 0.2)
            throw config_error("config: zonal t0 * epsilon must stay <= 0.2");
    } else if (c.experiment != ExperimentKind::Admissibility) {
        if (c.hbar_list.empty()) throw config_error("config: hbar_list is required");
        for (double h : c.hbar_list)
            if (!(h > 0.0)) throw config_error("config: hbar values must be positive");
        for (std::size_t i = 0; i + 1 < c.hbar_list.size(); ++i)
            if (c.hbar_list[i] <= c.hbar_list[i + 1])
                throw config_error("config: hbar_list must be strictly decreasing");
    }
    if (c.experiment == ExperimentKind::HoAverage ||
        c.experiment == ExperimentKind::SupScaling ||
        (c.experiment == ExperimentKind::Restriction && c.model != "flat2d")) {
        if (!(c.t0 > 0.0) || c.t0 > 0.5 * pi - 0.1)
            throw config_error("config: t0 must lie in (0, pi/2 - 0.1]");
    }
    if (!(c.epsilon > 0.0)) throw config_error("config: epsilon must be positive");
    if (c.grid_count < 8) throw config_error("config: grid_count must be >= 8");
    if (c.u_quad_count < 1) throw config_error("config: u_quad_count must be >= 1");
    if (c.experiment == ExperimentKind::Restriction && c.model != "ho" && c.model != "flat2d" &&
        c.model != "both")
        throw config_error("config: model must be ho, flat2d or both");
    if (!(c.omega_exponent > 0.0)) throw config_error("config: omega_exponent must be positive");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    bool have_experiment = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw config_error("config: empty value for '" + key + "'");

        if (key == "experiment") {
            const auto kind = experiment_from_name(val);
            if (!kind) throw config_error("config: unknown experiment '" + val + "'");
            c.experiment = *kind;
            have_experiment = true;
        } else if (key == "hbar_list") {
            c.hbar_list = parse_double_list(key, val);
        } else if (key == "degree_list") {
            c.degree_list.clear();
            for (const std::string& p : split_csv(val)) c.degree_list.push_back(parse_int(key, p));
        } else if (key == "t0") {
            c.t0 = parse_double(key, val);
        } else if (key == "epsilon") {
            c.epsilon = parse_double(key, val);
        } else if (key == "grid_count") {
            c.grid_count = parse_int(key, val);
        } else if (key == "grid_halfwidth") {
            c.grid_halfwidth = parse_double(key, val);
        } else if (key == "u_quad_count") {
            c.u_quad_count = parse_int(key, val);
        } else if (key == "x_samples") {
            c.x_samples = parse_double_list(key, val);
        } else if (key == "x_linspace") {
            const std::vector<double> v = parse_double_list(key, val);
            if (v.size() != 3 || v[2] < 1) throw config_error("config: x_linspace = lo,hi,count");
            const int n = static_cast<int>(v[2]);
            c.x_samples.clear();
            for (int i = 0; i < n; ++i)
                c.x_samples.push_back(n == 1 ? 0.5 * (v[0] + v[1])
                                             : v[0] + (v[1] - v[0]) * i / (n - 1));
        } else if (key == "omega_exponent") {
            c.omega_exponent = parse_double(key, val);
        } else if (key == "radial_count") {
            c.radial_count = parse_int(key, val);
        } else if (key == "angular_count") {
            c.angular_count = parse_int(key, val);
        } else if (key == "circle_count") {
            c.circle_count = parse_int(key, val);
        } else if (key == "chi_inner") {
            c.chi_inner = parse_double(key, val);
        } else if (key == "chi_outer") {
            c.chi_outer = parse_double(key, val);
        } else if (key == "panel_order") {
            c.panel_order = parse_int(key, val);
        } else if (key == "model") {
            c.model = val;
        } else if (key == "segment") {
            const std::vector<double> v = parse_double_list(key, val);
            if (v.size() != 4) throw config_error("config: segment = x0,y0,x1,y1");
            c.segment = {v[0], v[1], v[2], v[3]};
        } else if (key == "curve_count") {
            c.curve_count = parse_int(key, val);
        } else if (key == "grid2d_count") {
            c.grid2d_count = parse_int(key, val);
        } else if (key == "grid2d_halfwidth") {
            c.grid2d_halfwidth = parse_double(key, val);
        } else if (key == "ball_radial") {
            c.ball_radial = parse_int(key, val);
        } else if (key == "ball_angular") {
            c.ball_angular = parse_int(key, val);
        } else if (key == "oracle_triangle") {
            c.oracle_triangle = parse_bool(key, val);
        } else if (key == "u_list") {
            c.u_list = parse_double_list(key, val);
        } else if (key == "consistency") {
            c.consistency = parse_bool(key, val);
        } else if (key == "report") {
            c.report_name = val;
        } else if (key == "summary") {
            c.summary_name = val;
        } else {
            throw config_error("config: unknown key '" + key + "'");
        }
    }
    if (!have_experiment) throw config_error("config: missing 'experiment'");
    validate(c);
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    return parse_config(in);
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Runner {
    const ExperimentConfig& c;
    Exec exec;
    double tol_scale;
    std::vector<ReportRow> rows;
    json summary;

    void add_row(double hbar, double x, double value, double oracle, double rel_gap,
                 std::string status = "ok", const std::string& id_suffix = "") {
        rows.push_back(ReportRow{experiment_name(c.experiment) + id_suffix, hbar, x, value, oracle,
                                 rel_gap, std::move(status)});
    }

    // ---- ho-average (+ oracle triangle rows) ----
    void run_ho_average() {
        const double s = std::sin(c.t0);
        std::vector<AverageProfile> profiles;
        std::vector<double> max_dev_per_hbar;
        std::vector<double> xs = c.x_samples;
        if (xs.empty()) {
            for (int i = 0; i < 11; ++i) xs.push_back(-0.19 + 0.038 * i);
        }

        for (double hbar : c.hbar_list) {
            const HOConfig config(hbar, c.t0, c.epsilon, c.grid_count, c.grid_halfwidth);
            const IntervalQuadrature u_quad =
                gauss_legendre(c.u_quad_count, -c.epsilon, c.epsilon);
            const std::vector<AveragedIntensity> prof =
                averaged_intensity_ho_profile(config, xs, u_quad, exec);

            AverageProfile profile{hbar, xs, {}};
            double max_dev = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double value = prof[j].value;
                const double dev = std::abs(value * s - 1.0);
                max_dev = std::max(max_dev, dev);
                profile.values.push_back(value);
                add_row(hbar, xs[j], value, 1.0 / s, dev,
                        prof[j].out_of_band ? "warning:out-of-band" : "ok");
            }
            profiles.push_back(std::move(profile));
            max_dev_per_hbar.push_back(max_dev);
        }

        summary["limit"] = 1.0 / s;
        summary["max_abs_dev_per_hbar"] = max_dev_per_hbar;
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < max_dev_per_hbar.size(); ++i)
            monotone = monotone && max_dev_per_hbar[i] > max_dev_per_hbar[i + 1];
        summary["dev_decreasing_in_hbar"] = monotone;
        if (profiles.size() >= 3) {
            const BandSummary band = two_sided_band(profiles);
            summary["band"] = {{"c1", band.c1}, {"c2", band.c2}, {"ratio", band.ratio}};
        }
        if (c.oracle_triangle) run_oracle_triangle();
    }

    void run_oracle_triangle() {
        double worst = 0.0;
        for (double hbar : c.hbar_list) {
            const HOConfig config(hbar, c.t0, c.epsilon, c.grid_count, c.grid_halfwidth);
            const WaveField psi = ho_ground_state(config);
            for (double u : c.u_list) {
                const HermitianOperatorDense op = build_ho_operator(config, u);
                const WaveField spectral =
                    propagate_spectral(op, psi, c.t0, hbar, ho_energy_cutoff(hbar, std::abs(u)));

                // sup-norm gaps relative to the coherent peak (pi hbar)^{-1/4}
                const double peak = std::pow(pi * hbar, -0.25);
                double gap_sc = 0.0;
                for (int j = 0; j < config.grid.count; ++j) {
                    const double xm = config.grid.point(j);
                    gap_sc = std::max(gap_sc, std::abs(std::abs(spectral.values[j]) -
                                                       coherent_modulus(hbar, c.t0, u, xm)));
                }
                gap_sc /= peak;

                double gap_mc = 0.0;
                const int mehler_points = 129;
                for (int j = 0; j < mehler_points; ++j) {
                    const double xm = -2.0 + 4.0 * j / (mehler_points - 1);
                    const double mm = std::abs(mehler_propagate(config, u, xm));
                    gap_mc = std::max(gap_mc, std::abs(mm - coherent_modulus(hbar, c.t0, u, xm)));
                }
                gap_mc /= peak;

                worst = std::max(worst, std::max(gap_sc, gap_mc));
                add_row(hbar, u, gap_sc, 0.0, gap_sc, "ok", ":triangle-spectral");
                add_row(hbar, u, gap_mc, 0.0, gap_mc, "ok", ":triangle-mehler");
            }
        }
        summary["triangle_max_rel_gap"] = worst;
        summary["triangle_pass"] = worst <= 1e-6 * tol_scale;
    }

    // ---- flat-average ----
    void run_flat_average() {
        const CutoffProfile chi(c.chi_inner, c.chi_outer);
        std::vector<double> sup_per_hbar;
        double worst_gap = 0.0;
        for (double hbar : c.hbar_list) {
            const UniformGrid grid(-c.grid_halfwidth, c.grid_halfwidth, c.grid_count, true);
            const WaveField f = flat_gaussian(grid, hbar);
            std::vector<double> xs = c.x_samples.empty()
                                         ? std::vector<double>{-0.5, 0.0, 0.5}
                                         : c.x_samples;
            double sup = 0.0;
            for (double x_req : xs) {
                // snap to the lattice; the identity uses a cyclic translation
                const double x = std::round(x_req / grid.spacing()) * grid.spacing();
                const MotivationIdentity check =
                    motivation_identity_check(f, x, chi, c.panel_order);
                const double rel = check.gap / std::max(check.lhs, 1.0);
                worst_gap = std::max(worst_gap, rel);
                sup = std::max(sup, check.lhs);
                add_row(hbar, x, check.lhs, check.rhs, rel);
            }
            sup_per_hbar.push_back(sup);
        }
        const auto [mn, mx] = std::minmax_element(sup_per_hbar.begin(), sup_per_hbar.end());
        summary["identity_max_rel_gap"] = worst_gap;
        summary["identity_pass"] = worst_gap <= 1e-6 * tol_scale;
        summary["sup_intensity_per_hbar"] = sup_per_hbar;
        summary["sup_ratio"] = *mx / *mn;
    }

    // ---- zonal-average (+ consistency rows) ----
    void run_zonal_average() {
        std::vector<double> ratios, local_sups;
        for (int n : c.degree_list) {
            const ZonalConfig config(n, c.t0, c.epsilon);
            const double hbar = config.hbar();
            const BallQuadrature disk =
                disk_quadrature(c.epsilon, c.radial_count, c.angular_count);
            const double value =
                averaged_intensity_zonal(config, Vec2{0.0, 0.0}, disk, exec, c.circle_count);
            const double limit = 2.0 * pi * c.epsilon / c.t0;
            const bool resolved = 2.0 * c.t0 * c.epsilon / hbar >= 15.0;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            if (resolved) {
                ratios.push_back(value / limit);
                add_row(hbar, 0.0, value, limit, std::abs(value / limit - 1.0));
            } else {
                add_row(hbar, 0.0, value, nan, nan);
            }
            // the window must exclude the deformed peak, so c0 > 1/t0
            const double c0 = std::max(4.0, 2.0 / c.t0);
            const double local_sup = local_sup_bound_check(config, c0, exec);
            local_sups.push_back(local_sup);
            add_row(hbar, 0.0, local_sup, nan, nan, "ok", ":local-sup");
        }

        std::vector<int> degs(c.degree_list.begin(), c.degree_list.end());
        const ZonalScaling scaling = zonal_sup_scaling(degs);
        summary["pole_slope"] = scaling.slope;
        summary["pole_values"] = scaling.pole_values;
        if (!ratios.empty()) {
            const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
            summary["averaged_ratio_min"] = *mn;
            summary["averaged_ratio_max"] = *mx;
            summary["averaged_band_ratio"] = *mx / *mn;
        }
        const auto [lmn, lmx] = std::minmax_element(local_sups.begin(), local_sups.end());
        summary["local_sup_ratio"] = *lmx / *lmn;
        if (c.consistency) run_zonal_consistency();
    }

    void run_zonal_consistency() {
        // Laplace integral vs recurrence on a sample of degrees and radii
        double worst_legendre = 0.0;
        const std::vector<int> degs{1, 5, 25, 100, 250, 400};
        for (int n : degs) {
            const CircleQuadrature quad = circle_quadrature(std::max(64, 4 * n));
            for (double r : {0.0, 0.3, 0.7, 1.5, 2.9}) {
                const double a = zonal_laplace_integral(n, r, quad);
                const double b = legendre_pn(n, std::cos(r));
                worst_legendre = std::max(worst_legendre, std::abs(a - b));
                add_row(std::numeric_limits<double>::quiet_NaN(), r, a, b, std::abs(a - b), "ok",
                        ":legendre");
            }
        }
        summary["legendre_max_gap"] = worst_legendre;
        summary["legendre_pass"] = worst_legendre <= 1e-10 * tol_scale;

        // surrogate vs Bessel oracle on sampled (n, u, x)
        double worst_surrogate = 0.0;
        for (int n : {c.degree_list.front(), c.degree_list.back()}) {
            const ZonalConfig config(n, c.t0, c.epsilon);
            const double hbar = config.hbar();
            for (const Vec2& u : {Vec2{0.0, 0.0}, Vec2{0.3 * c.epsilon, -0.2 * c.epsilon},
                                  Vec2{-0.7 * c.epsilon, 0.1 * c.epsilon}}) {
                for (const Vec2& x : {Vec2{0.0, 0.0}, Vec2{0.01, 0.02}}) {
                    const CircleQuadrature quad =
                        surrogate_circle_quadrature(config, std::hypot(x[0], x[1]));
                    const double a = std::abs(deformed_zonal_surrogate(config, u, x, quad));
                    const double b = bessel_oracle_modulus(hbar, c.t0, u, x);
                    const double rel = std::abs(a - b) / std::sqrt(2.0 * pi / hbar);
                    worst_surrogate = std::max(worst_surrogate, rel);
                    add_row(hbar, std::hypot(x[0], x[1]), a, b, rel, "ok", ":surrogate");
                }
            }
        }
        summary["surrogate_max_rel_gap"] = worst_surrogate;
        summary["surrogate_pass"] = worst_surrogate <= 1e-8 * tol_scale;
    }

    // ---- sup-scaling ----
    void run_sup_scaling() {
        const std::vector<SupStatisticsRow> stats =
            sup_statistics(c.t0, c.epsilon, c.hbar_list, c.grid_count, c.grid_halfwidth,
                           c.u_quad_count, 21, exec);
        std::vector<double> hb, integral_sup, sup_int;
        for (const SupStatisticsRow& r : stats) {
            hb.push_back(r.hbar);
            integral_sup.push_back(r.integral_sup);
            sup_int.push_back(r.sup_intensity);
            add_row(r.hbar, std::numeric_limits<double>::quiet_NaN(), r.integral_sup,
                    std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN());
        }
        const auto [mn, mx] = std::minmax_element(sup_int.begin(), sup_int.end());
        summary["integral_sup_slope"] = loglog_slope(hb, integral_sup);
        summary["sup_intensity_per_hbar"] = sup_int;
        summary["sup_intensity_ratio"] = *mx / *mn;
        summary["slope_pass"] = std::abs(loglog_slope(hb, integral_sup) + 0.5) <= 0.05 * tol_scale;
    }

    // ---- restriction ----
    void run_restriction() {
        if (c.model == "ho" || c.model == "both") run_restriction_ho();
        if (c.model == "flat2d" || c.model == "both") run_restriction_flat2d();
    }

    void run_restriction_ho() {
        std::vector<double> margins;
        double worst_gap = 0.0;
        for (double hbar : c.hbar_list) {
            const HOConfig config(hbar, c.t0, c.epsilon, c.grid_count, c.grid_halfwidth);
            const BallQuadrature ball = interval_ball_quadrature(c.epsilon, c.u_quad_count);

            // H = {0}: per-u restriction values are the point intensities
            std::vector<double> xs{0.0};
            const DeformedSweep sweep = deformed_sweep(config, ball.nodes, xs, exec);
            std::vector<double> per_u(ball.size());
            for (std::size_t m = 0; m < ball.size(); ++m) {
                const double mod = sweep.moduli(static_cast<Eigen::Index>(m), 0);
                per_u[m] = mod * mod;
            }
            // independent association: curve-node outer sum (single node here)
            double swapped = 0.0;
            for (std::size_t m = 0; m < ball.size(); ++m)
                swapped += ball.weights[m] * per_u[m];
            const double gap = fubini_check(per_u, ball, swapped);
            worst_gap = std::max(worst_gap, gap);
            add_row(hbar, 0.0, gap, std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), "ok", ":ho-fubini");

            const double omega = std::pow(hbar, c.omega_exponent);
            const RestrictionReport rep = good_set_fraction(per_u, ball.weights, omega);
            margins.push_back(rep.good_fraction - (1.0 - omega));
            add_row(hbar, 0.0, rep.good_fraction, 1.0 - omega,
                    std::numeric_limits<double>::quiet_NaN(), "ok", ":ho-goodset");
        }
        summary["ho_fubini_max_gap"] = worst_gap;
        summary["ho_goodset_min_margin"] = *std::min_element(margins.begin(), margins.end());
    }

    void run_restriction_flat2d() {
        std::vector<double> margins;
        double worst_gap = 0.0, worst_oracle = 0.0;
        for (double hbar : c.hbar_list) {
            const UniformGrid grid(-c.grid2d_halfwidth, c.grid2d_halfwidth, c.grid2d_count, true);
            const FlatState2D base = flat_gaussian_2d(grid, hbar);
            const Flat2DDeformedEvaluator evaluator(base);
            const Curve curve = segment_curve({c.segment[0], c.segment[1]},
                                              {c.segment[2], c.segment[3]}, c.curve_count);
            const BallQuadrature ball = disk_quadrature(c.epsilon, c.ball_radial, c.ball_angular);

            // closed-form oracle: |gaussian|^2 line integral along the segment
            const double oracle_gap = gaussian_line_oracle_gap(grid, hbar, curve);
            worst_oracle = std::max(worst_oracle, oracle_gap);
            add_row(hbar, std::numeric_limits<double>::quiet_NaN(), oracle_gap, 0.0, oracle_gap,
                    "ok", ":flat2d-lineoracle");

            std::vector<Vec2> pts;
            for (double t : curve.quadrature.nodes) pts.push_back(curve.point(t));
            std::vector<double> per_u(ball.size(), 0.0);
            std::vector<std::vector<cdouble>> per_u_values(ball.size());
            par_for(exec, ball.size(), [&](std::size_t m) {
                const auto node = ball.node(m);
                const Vec2 u{node[0], node[1]};
                per_u_values[m] = evaluator.eval(u, pts);
                double acc = 0.0;
                for (std::size_t j = 0; j < pts.size(); ++j)
                    acc += curve.quadrature.weights[j] * std::norm(per_u_values[m][j]) *
                           curve.speed(curve.quadrature.nodes[j]);
                per_u[m] = acc;
            });

            // swapped order: integrate over u at each curve node first
            double swapped = 0.0;
            for (std::size_t j = 0; j < pts.size(); ++j) {
                double over_u = 0.0;
                for (std::size_t m = 0; m < ball.size(); ++m)
                    over_u += ball.weights[m] * std::norm(per_u_values[m][j]);
                swapped += curve.quadrature.weights[j] * curve.speed(curve.quadrature.nodes[j]) *
                           over_u;
            }
            const double gap = fubini_check(per_u, ball, swapped);
            worst_gap = std::max(worst_gap, gap);
            add_row(hbar, std::numeric_limits<double>::quiet_NaN(), gap,
                    std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), "ok", ":flat2d-fubini");

            const double omega = std::pow(hbar, c.omega_exponent);
            const RestrictionReport rep = good_set_fraction(per_u, ball.weights, omega);
            margins.push_back(rep.good_fraction - (1.0 - omega));
            add_row(hbar, std::numeric_limits<double>::quiet_NaN(), rep.good_fraction, 1.0 - omega,
                    std::numeric_limits<double>::quiet_NaN(), "ok", ":flat2d-goodset");
        }
        summary["flat2d_fubini_max_gap"] = worst_gap;
        summary["flat2d_lineoracle_max_rel_gap"] = worst_oracle;
        summary["flat2d_goodset_min_margin"] = *std::min_element(margins.begin(), margins.end());
    }

    double gaussian_line_oracle_gap(const UniformGrid& grid, double hbar, const Curve& curve) {
        // restriction_integral of the static normalized Gaussian vs the exact
        // 1-D Gaussian integral along the segment
        const double amp = std::pow(pi * hbar, -0.5);
        const auto state = [&](std::array<double, 2> p) {
            return cdouble(amp * std::exp(-(p[0] * p[0] + p[1] * p[1]) / (2.0 * hbar)), 0.0);
        };
        const double numeric = restriction_integral(state, curve);
        (void)grid;

        // |f(a + t d)|^2 = amp^2 exp(-(|a|^2 + 2 t <a,d> + t^2 |d|^2)/hbar); integrate
        // dsigma = |d| dt over t in [0,1]
        const double ax = curve.point(0.0)[0], ay = curve.point(0.0)[1];
        const double bx = curve.point(1.0)[0], by = curve.point(1.0)[1];
        const double dx = bx - ax, dy = by - ay;
        const double len = std::hypot(dx, dy);
        const double alpha = (dx * dx + dy * dy) / hbar;
        const double beta = 2.0 * (ax * dx + ay * dy) / hbar;
        const double gamma = (ax * ax + ay * ay) / hbar;
        // int_0^1 exp(-(alpha t^2 + beta t + gamma)) dt via erf
        const double sa = std::sqrt(alpha);
        const double shift = beta / (2.0 * sa);
        const double pref = std::exp(shift * shift - gamma) * std::sqrt(pi) / (2.0 * sa);
        const double exact = amp * amp * len * pref *
                             (std::erf(sa + shift) - std::erf(shift));
        return std::abs(numeric - exact) / std::max(std::abs(exact), 1e-300);
    }

    // ---- admissibility ----
    void run_admissibility() {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::mt19937 rng(1234);

        struct Case {
            std::string name;
            MagneticFamily family;
            double expected_sigma;
        };
        std::vector<Case> cases;
        cases.push_back({"constant", constant_family(), 1.0});
        cases.push_back({"degenerate", degenerate_family(), 0.0});
        cases.push_back({"overcomplete", overcomplete_family(), 1.0});

        const std::vector<std::vector<double>> xs = {{0.0, 0.0}, {0.3, -0.2}, {-0.5, 0.1}};
        const std::vector<std::vector<double>> us2 = {{0.0, 0.0}, {0.1, -0.1}, {0.2, 0.05}};
        const std::vector<std::vector<double>> us3 = {{0.0, 0.0, 0.0}, {0.1, -0.1, 0.05}};

        json family_summary = json::array();
        for (const Case& cs : cases) {
            const auto& us = cs.family.param_dim == 3 ? us3 : us2;
            const AdmissibilityReport rep = admissibility_check(cs.family, xs, us, 1e-3);
            add_row(nan, nan, rep.min_singular_value, cs.expected_sigma,
                    std::abs(rep.min_singular_value - cs.expected_sigma), "ok",
                    ":" + cs.name);
            json subset = json::array();
            for (int i : rep.chosen_subset) subset.push_back(i + 1);  // 1-based in reports
            family_summary.push_back({{"family", cs.name},
                                      {"sigma_min", rep.min_singular_value},
                                      {"admissible", rep.admissible},
                                      {"subset", subset}});
        }
        summary["families"] = family_summary;

        // orthogonal reparametrization invariance of sigma_min
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            const Eigen::MatrixXd q = random_orthogonal(3, rng);
            MagneticFamily rotated = overcomplete_family();
            const MagneticFamily base = overcomplete_family();
            rotated.components = [base, q](std::span<const double> x, std::span<const double> u) {
                std::vector<double> v(3);
                for (int i = 0; i < 3; ++i)
                    v[i] = q(i, 0) * u[0] + q(i, 1) * u[1] + q(i, 2) * u[2];
                return base.components(x, v);
            };
            rotated.jacobian = nullptr;
            const AdmissibilityReport a = admissibility_check(base, xs, us3, 1e-3);
            const AdmissibilityReport b = admissibility_check(rotated, xs, us3, 1e-3);
            worst = std::max(worst, std::abs(a.min_singular_value - b.min_singular_value));
        }
        add_row(nan, nan, worst, 0.0, worst, "ok", ":orthogonal-invariance");
        summary["orthogonal_invariance_gap"] = worst;
        summary["orthogonal_invariance_pass"] = worst <= 1e-10 * tol_scale;
    }

    static MagneticFamily constant_family() {
        MagneticFamily f;
        f.space_dim = 2;
        f.param_dim = 2;
        f.components = [](std::span<const double>, std::span<const double> u) {
            return std::vector<double>{u[0], u[1]};
        };
        return f;
    }

    static MagneticFamily degenerate_family() {
        MagneticFamily f;
        f.space_dim = 2;
        f.param_dim = 2;
        f.components = [](std::span<const double>, std::span<const double> u) {
            return std::vector<double>{u[0], u[0]};
        };
        return f;
    }

    static MagneticFamily overcomplete_family() {
        MagneticFamily f;
        f.space_dim = 2;
        f.param_dim = 3;
        f.components = [](std::span<const double>, std::span<const double> u) {
            return std::vector<double>{u[0] + u[2], u[1]};
        };
        return f;
    }

    static Eigen::MatrixXd random_orthogonal(int k, std::mt19937& rng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd g(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) g(i, j) = normal(rng);
        return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    }
};

}  // namespace

RunResult run(const ExperimentConfig& config, Exec exec, double tolerance_scale) {
    validate(config);
    Runner runner{config, exec, tolerance_scale, {}, json::object()};
    runner.summary["experiment"] = experiment_name(config.experiment);

    int exit_code = 0;
    try {
        switch (config.experiment) {
            case ExperimentKind::HoAverage: runner.run_ho_average(); break;
            case ExperimentKind::FlatAverage: runner.run_flat_average(); break;
            case ExperimentKind::ZonalAverage: runner.run_zonal_average(); break;
            case ExperimentKind::SupScaling: runner.run_sup_scaling(); break;
            case ExperimentKind::Restriction: runner.run_restriction(); break;
            case ExperimentKind::Admissibility: runner.run_admissibility(); break;
        }
    } catch (const resolution_error& e) {
        runner.rows.push_back(ReportRow{experiment_name(config.experiment),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN(), e.achieved(),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        "error:resolution"});
        runner.summary["error"] = e.what();
        exit_code = 2;
    }

    for (const ReportRow& row : runner.rows)
        if (row.status.rfind("error:", 0) == 0) exit_code = std::max(exit_code, 2);

    RunResult result;
    result.rows = std::move(runner.rows);
    result.summary_json = runner.summary.dump(2) + "\n";
    result.exit_code = exit_code;
    return result;
}

std::string render_csv(std::span<const ReportRow> rows) {
    std::string out = "experiment,hbar,x,value,oracle,rel_gap,status\n";
    for (const ReportRow& r : rows) {
        out += r.experiment;
        out += ',';
        out += fmt(r.hbar);
        out += ',';
        out += fmt(r.x);
        out += ',';
        out += fmt(r.value);
        out += ',';
        out += fmt(r.oracle);
        out += ',';
        out += fmt(r.rel_gap);
        out += ',';
        out += r.status;
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need matching lists of length >= 2");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace maglab
