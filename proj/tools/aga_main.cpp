// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "aga/harness.hpp"
#include "aga/log.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    std::string kind;
    std::string variants;  // comma separated
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
};

aga::ExperimentConfig build_config(const CliArgs& args) {
    aga::ExperimentConfig cfg =
        args.config_path.empty() ? aga::default_config() : aga::load_config(args.config_path);

    aga::CliOverrides overrides;
    if (!args.out_dir.empty()) overrides.out_dir = args.out_dir;
    if (args.seed_set) overrides.seed = args.seed;
    if (args.jobs > 0) overrides.jobs = args.jobs;
    if (!args.kind.empty()) overrides.kind = args.kind;
    if (!args.variants.empty()) {
        std::vector<std::string> names;
        std::string current;
        for (char c : args.variants) {
            if (c == ',') {
                if (!current.empty()) names.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        if (!current.empty()) names.push_back(current);
        overrides.variants = std::move(names);
    }
    aga::apply_overrides(cfg, overrides);
    return cfg;
}

int fail(const std::string& error_class, const std::string& msg) {
    std::cerr << "aga: error[" << error_class << "]: " << msg << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic multi-object association benchmark: generate pseudo videos, run "
                 "tracker variants, evaluate association quality."};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CliArgs args;
    app.add_option("--config", args.config_path, "JSON experiment config")
        ->check(CLI::ExistingFile);
    app.add_option("--out", args.out_dir, "output directory (overrides config)");
    app.add_option("--jobs", args.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", args.seed, "suite seed (overrides config)")
        ->each([&](const std::string&) { args.seed_set = true; });
    app.add_option("--variant", args.variants, "comma-separated variant names to run");
    app.add_option("--kind", args.kind, "video kind filter: track, swap or both")
        ->check(CLI::IsMember({"track", "swap", "both"}));

    auto* generate = app.add_subcommand("generate", "generate the synthetic video suite");
    auto* track = app.add_subcommand("track", "run tracker variants over a generated suite");
    auto* evaluate = app.add_subcommand("evaluate", "score tracked outputs and write reports");
    auto* sweep = app.add_subcommand("sweep", "window-size sweep (track + evaluate)");

    CLI11_PARSE(app, argc, argv);

    try {
        const aga::ExperimentConfig cfg = build_config(args);
        if (generate->parsed()) {
            aga::cmd_generate(cfg);
        } else if (track->parsed()) {
            aga::cmd_track(cfg);
        } else if (evaluate->parsed()) {
            const aga::AggregateReport report = aga::cmd_evaluate(cfg);
            aga::log_info("evaluate: wrote reports for " + std::to_string(report.cells.size()) +
                          " (variant, kind) cells");
        } else if (sweep->parsed()) {
            aga::cmd_sweep(cfg);
        }
    } catch (const aga::ConfigError& e) {
        return fail("config_error", e.what());
    } catch (const aga::IoError& e) {
        return fail(e.error_class(), e.what());
    } catch (const std::invalid_argument& e) {
        return fail("contract_violation", e.what());
    } catch (const std::exception& e) {
        return fail("internal_error", e.what());
    }
    return 0;
}
