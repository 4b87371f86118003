// Experiment runner: one subcommand per experiment, config-file driven,
// emitting report.csv and summary.json into the output directory.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "maglab/experiments.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    bool serial = false;
    double tolerance_scale = 1.0;
};

int run_experiment(maglab::ExperimentKind kind, const CommonOpts& opts) {
    maglab::ExperimentConfig config;
    try {
        config = maglab::parse_config_file(opts.config_path);
    } catch (const maglab::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (config.experiment != kind) {
        std::cerr << "error: config declares experiment '"
                  << maglab::experiment_name(config.experiment) << "' but subcommand is '"
                  << maglab::experiment_name(kind) << "'\n";
        return 1;
    }

    maglab::RunResult result;
    try {
        result = maglab::run(config, opts.serial ? maglab::Exec::Serial : maglab::Exec::Parallel,
                             opts.tolerance_scale);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }

    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    const std::string report = (std::filesystem::path(opts.out_dir) / config.report_name).string();
    const std::string summary =
        (std::filesystem::path(opts.out_dir) / config.summary_name).string();
    maglab::write_text_file(report, maglab::render_csv(result.rows));
    maglab::write_text_file(summary, result.summary_json);
    std::cout << report << "\n" << summary << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"magnetically deformed eigenfunction experiments"};
    app.require_subcommand(1);

    const std::vector<maglab::ExperimentKind> kinds = {
        maglab::ExperimentKind::FlatAverage,  maglab::ExperimentKind::HoAverage,
        maglab::ExperimentKind::ZonalAverage, maglab::ExperimentKind::Restriction,
        maglab::ExperimentKind::Admissibility, maglab::ExperimentKind::SupScaling,
    };

    CommonOpts opts;
    std::vector<CLI::App*> subs;
    for (maglab::ExperimentKind kind : kinds) {
        CLI::App* sub = app.add_subcommand(maglab::experiment_name(kind), "");
        sub->add_option("--config", opts.config_path, "experiment config file")->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_flag("--serial", opts.serial, "force the deterministic serial order");
        sub->add_option("--tolerance-scale", opts.tolerance_scale,
                        "scale verdict thresholds in the summary");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < kinds.size(); ++i)
        if (subs[i]->parsed()) return run_experiment(kinds[i], opts);
    return 1;
}
