#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maglab/common.hpp"

namespace maglab {

enum class ExperimentKind {
    FlatAverage,
    HoAverage,
    ZonalAverage,
    Restriction,
    Admissibility,
    SupScaling,
};

std::string experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(const std::string& name);

/// Flat key = value configuration (UTF-8, '#' comments). Unknown keys are
/// rejected. See the shipped configs/ for per-experiment examples.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::HoAverage;

    std::vector<double> hbar_list;  // strictly decreasing
    std::vector<int> degree_list;   // zonal only, strictly increasing

    double t0 = 0.5;
    double epsilon = 0.5;
    int grid_count = 1024;
    double grid_halfwidth = 10.0;
    int u_quad_count = 24;
    std::vector<double> x_samples;
    double omega_exponent = 0.25;

    // zonal resolutions
    int radial_count = 48;
    int angular_count = 96;
    int circle_count = 0;  // 0 = sized from the resolution rule

    // flat model
    double chi_inner = 1.0;
    double chi_outer = 2.0;
    int panel_order = 64;

    // restriction experiment
    std::string model = "both";  // ho | flat2d | both
    std::array<double, 4> segment{-0.5, -0.3, 0.6, 0.4};
    int curve_count = 200;
    int grid2d_count = 128;
    double grid2d_halfwidth = 6.0;
    int ball_radial = 12;
    int ball_angular = 24;

    // optional row families
    bool oracle_triangle = false;           // ho-average
    std::vector<double> u_list{0.0, 0.25, -0.25};
    bool consistency = false;               // zonal-average

    std::string report_name = "report.csv";
    std::string summary_name = "summary.json";
};

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct ReportRow {
    std::string experiment;
    double hbar = std::numeric_limits<double>::quiet_NaN();
    double x = std::numeric_limits<double>::quiet_NaN();
    double value = std::numeric_limits<double>::quiet_NaN();
    double oracle = std::numeric_limits<double>::quiet_NaN();
    double rel_gap = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

struct RunResult {
    std::vector<ReportRow> rows;
    std::string summary_json;  // pretty-printed, stable key order
    int exit_code = 0;         // 0 ok/warnings, 2 resolution error
};

/// Executes the configured experiment. tolerance_scale loosens (>1) or
/// tightens (<1) the thresholds behind the summary verdict fields; it does not
/// change any computed value.
RunResult run(const ExperimentConfig& config, Exec exec = Exec::Parallel,
              double tolerance_scale = 1.0);

/// CSV columns exactly: experiment,hbar,x,value,oracle,rel_gap,status.
/// Missing numeric fields render as n/a; doubles use %.12g; LF endings.
std::string render_csv(std::span<const ReportRow> rows);

void write_text_file(const std::string& path, const std::string& content);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace maglab
