#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fastflow/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"adaptive flow-matching inference toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    fastflow::CliOptions options;
    long seed = 0;
    std::string out_dir;
    std::string resume_registry;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key=value lines)")->required();
        cmd->add_option("--seed", seed, "override run.seed");
        cmd->add_option("--out", out_dir, "override the output directory");
        cmd->add_option("--resume-registry", resume_registry,
                        "resume bandit learning from a banditreg-v1 file");
    };

    add_common(app.add_subcommand("train-toy", "train the toy MLP velocity field"));
    add_common(app.add_subcommand("run", "run a generation experiment"));
    add_common(app.add_subcommand("verify-bound", "verify the final-state error bound"));
    add_common(app.add_subcommand("regret", "simulate UCB regret on a synthetic instance"));
    add_common(app.add_subcommand("report", "summarize results into plot-ready CSVs"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are config errors
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0) {
        options.seed = static_cast<std::uint64_t>(seed);
    }
    if (sub->count("--out") > 0) {
        options.out = out_dir;
    }
    if (sub->count("--resume-registry") > 0) {
        options.resume_registry = resume_registry;
    }
    return fastflow::dispatch_config_file(sub->get_name(), config_path, options, std::cout,
                                          std::cerr);
}
