// qrmsim: batch front-end for the trapped-ion quantum Rabi model simulator.
//
// Usage: qrmsim <experiment> --config <file> [--fock-cutoff N] [--output PATH]
//               [--format csv|json] [--jobs K]
// Exit codes: 0 success, 1 config error, 2 numerical-invariant failure.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qrmsim/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"trapped-ion quantum Rabi model simulator"};
    app.require_subcommand(1);

    struct Args {
        std::string config;
        int fock_cutoff = -1;
        std::string output;
        std::string format;
        int jobs = -1;
    };
    Args args;

    const std::vector<std::string> experiments = {"evolve", "jc-validate", "ground-state",
                                                  "adiabatic", "regime-map"};
    for (const auto& name : experiments) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config, "experiment config file (JSON)")
            ->required();
        sub->add_option("--fock-cutoff", args.fock_cutoff, "override Fock cutoff N");
        sub->add_option("--output", args.output, "override output path");
        sub->add_option("--format", args.format, "override output format (csv|json)");
        sub->add_option("--jobs", args.jobs, "worker threads for grid/ladder runs");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();
    qrmsim::CliOverrides over;
    if (args.fock_cutoff >= 0) over.fock_cutoff = args.fock_cutoff;
    if (!args.output.empty()) over.output_path = args.output;
    if (!args.format.empty()) over.output_format = args.format;
    if (args.jobs >= 0) over.jobs = args.jobs;

    try {
        const auto cfg = qrmsim::load_config(args.config, experiment, over);
        qrmsim::run_experiment(cfg);
    } catch (const qrmsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
