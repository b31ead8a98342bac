// Command-line driver for the ZAP echo-cancellation experiments.
//
//   zapsim run --config configs/paper.cfg [--out DIR] [--seed N] [--runs N] [--set key=value]...
//   zapsim list-algorithms
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 divergence.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "zap/config.hpp"
#include "zap/errors.hpp"
#include "zap/harness.hpp"

namespace {

void print_summary(const std::vector<zap::Trace>& traces, std::size_t switch_at) {
    std::printf("%-16s %12s %12s %12s %12s\n", "algorithm", "ss_pre_db", "ss_post_db", "kappa_pre",
                "kappa_post");
    for (const auto& r : zap::summarize(zap::aggregate_runs(traces), switch_at))
        std::printf("%-16s %12.3f %12.3f %12.4g %12.4g\n", r.algorithm.c_str(), r.ss_misalign_db_pre,
                    r.ss_misalign_db_post, r.ss_kappa_pre, r.ss_kappa_post);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse system identification with zero-point attracting LMS filters"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment and write traces.csv / summary.csv");
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t runs = 0;
    std::vector<std::string> overrides;
    bool quiet = false;
    run->add_option("--config", config_path, "Experiment config file (key = value)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out_opt = run->add_option("--out", out_dir, "Output directory");
    auto* seed_opt = run->add_option("--seed", seed, "Base RNG seed");
    auto* runs_opt = run->add_option("--runs", runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
    run->add_option("--set", overrides, "Override a config key, as key=value");
    run->add_flag("--quiet", quiet, "Do not print the steady-state summary");

    auto* list = app.add_subcommand("list-algorithms", "Print the algorithm labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (*list) {
        for (const auto& a : zap::Algorithm::all()) std::cout << a.label() << '\n';
        return 0;
    }

    try {
        zap::ExperimentConfig config = zap::load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw zap::ConfigError("--set expects key=value, got '" + kv + "'");
            zap::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (*out_opt) config.out_dir = out_dir;
        if (*seed_opt) config.seed = seed;
        if (*runs_opt) config.runs = runs;
        config.validate();

        const auto traces = zap::run_scenario(config);
        zap::emit_csv(traces, config.switch_at, config.out_dir);
        if (!quiet) print_summary(traces, config.switch_at);
        return 0;
    } catch (const zap::DivergenceError& e) {
        std::cerr << "zapsim: " << e.what() << '\n';
        return 2;
    } catch (const zap::Error& e) {
        std::cerr << "zapsim: " << e.what() << '\n';
        return 1;
    }
}
