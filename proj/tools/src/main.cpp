#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfilter_cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace qfilter::cli;

    CLI::App app{"Quantum filtering with coherent-state inputs"};
    app.footer(output_formats_help());
    app.require_subcommand(1, 1);

    CommandOptions options;
    std::string config;
    std::string out = ".";
    std::string record;
    int trajectories = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"master", "Integrate the master equation"},
        {"simulate", "Simulate a measurement record and its filter"},
        {"filter", "Replay the filter on a stored record"},
        {"ensemble", "Run independent trajectories and compare with the master equation"},
        {"classical", "Run the classical particle filter benchmark"},
        {"verify", "Run the conditioning and Ito identity suites"},
    };
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", options.seed, "Seed for all randomness")->capture_default_str();
        sub->add_option("--out", out, "Output directory")->capture_default_str();
        if (std::string(name) == "ensemble") {
            sub->add_option("--trajectories", trajectories, "Number of trajectories")->check(CLI::PositiveNumber);
        }
        if (std::string(name) == "filter") {
            sub->add_option("--record", record, "Record CSV (default <out>/record.csv)");
        }
        if (std::string(name) == "verify") {
            sub->add_flag("--dims-check", options.dims_check, "Sweep dimensions 2 to 8");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (!config.empty()) options.config = config;
    options.out = out;
    if (!record.empty()) options.record = record;
    if (trajectories > 0) options.trajectories = trajectories;

    return dispatch(app.get_subcommands().front()->get_name(), options, std::cout, std::cerr);
}
