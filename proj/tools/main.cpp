// Command-line runner for the weighted Riesz system laboratory:
// classify | solve | analyze | sweep | hls-check, each driven by a
// key = value config file with [section] headers.

#include <CLI11.hpp>

#include <iostream>

#include "hslab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"radial solver and analysis lab for weighted Riesz-potential systems"};
    app.require_subcommand(1);

    std::string config_path, out_path, cache_dir, solution_path;
    int jobs = 1;
    long seed = 0;  // reserved for future stochastic features

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        auto* opt = cmd->add_option("--config", config_path, "config file path");
        if (needs_config) opt->required();
        cmd->add_option("--out", out_path, "primary output path override");
        cmd->add_option("--cache", cache_dir, "kernel table cache directory");
        cmd->add_option("--seed", seed, "reserved");
    };

    auto* classify = app.add_subcommand("classify", "derived exponents and regime");
    add_common(classify);

    auto* solve = app.add_subcommand("solve", "run the fixed-point solver");
    add_common(solve);

    auto* analyze = app.add_subcommand("analyze", "reports from a solution file");
    add_common(analyze);
    analyze->add_option("solution", solution_path, "solution bundle JSON")->required();
    std::string csv_path;
    analyze->add_option("--csv", csv_path, "profile CSV path override");

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep to CSV");
    add_common(sweep);
    sweep->add_option("--jobs", jobs, "parallel tuples")->check(CLI::PositiveNumber);

    auto* hls = app.add_subcommand("hls-check", "index and dilation-invariance checks");
    add_common(hls);

    CLI11_PARSE(app, argc, argv);

    hslab::RunConfig cfg;
    try {
        cfg = hslab::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return hslab::kExitUsage;
    }

    try {
        if (classify->parsed()) return hslab::cmd_classify(cfg, out_path);
        if (solve->parsed()) return hslab::cmd_solve(cfg, out_path, cache_dir);
        if (analyze->parsed())
            return hslab::cmd_analyze(cfg, solution_path, out_path, csv_path, cache_dir);
        if (sweep->parsed()) return hslab::cmd_sweep(cfg, out_path, jobs, cache_dir);
        if (hls->parsed()) return hslab::cmd_hls_check(cfg, out_path, cache_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hslab::kExitUsage;
    }
    return hslab::kExitUsage;
}
