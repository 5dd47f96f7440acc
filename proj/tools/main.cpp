#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smslab/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"smslab: very-weak-solution experiments for the Schrodinger equation with singular mass"};
    app.require_subcommand(1);

    std::string config_path;
    std::string campaign_name;
    std::string out_dir;
    int jobs = 0;
    int verbosity = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "run the campaigns described by a TOML config");
    run_cmd->add_option("config", config_path, "path to the experiment config")->required();
    run_cmd->add_option("--campaign", campaign_name,
                        "override the campaign (energy|moderateness|uniqueness|consistency|duhamel|all)");
    run_cmd->add_option("--out", out_dir, "override the output directory");
    run_cmd->add_option("--jobs", jobs, "worker pool size for ladder points (default: hardware)");
    run_cmd->add_flag("-v", verbosity, "verbose (timings)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        smslab::ExperimentConfig cfg = smslab::parse_config(config_path);
        smslab::RunOptions opt;
        if (!campaign_name.empty()) opt.campaign_override = smslab::campaign_from_name(campaign_name);
        if (!out_dir.empty()) opt.output_dir_override = out_dir;
        opt.jobs = jobs;
        opt.verbosity = verbosity;
        return smslab::run(cfg, opt, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
