#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvsm/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"RVSM sparse training experiments on the no-overlap ReLU network"};
    app.require_subcommand(1);

    std::string run_config;
    std::vector<std::string> run_sets;
    auto* run = app.add_subcommand("run", "execute one configured run");
    run->add_option("--config", run_config, "config JSON path")->required();
    run->add_option("--set", run_sets, "dotted key=value override (repeatable)");

    std::string sweep_config, sweep_grid;
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
    sweep->add_option("--config", sweep_config, "base config JSON path")->required();
    sweep->add_option("--grid", sweep_grid, "grid JSON path")->required();

    bool quick = false;
    auto* certify = app.add_subcommand("certify", "run all oracle certification suites");
    certify->add_flag("--quick", quick, "smaller sample counts");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return rvsm::cmd_run(run_config, run_sets);
    if (sweep->parsed()) return rvsm::cmd_sweep(sweep_config, sweep_grid);
    if (certify->parsed()) return rvsm::cmd_certify(quick);
    return 1;
}
