// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include "aga/harness.hpp"

namespace fs = std::filesystem;
using aga::AggregateReport;
using aga::cmd_evaluate;
using aga::cmd_generate;
using aga::cmd_sweep;
using aga::cmd_track;
using aga::ConfigError;
using aga::ExperimentConfig;

namespace {

fs::path tmp_dir(const std::string& name) {
    const fs::path dir = fs::path("aga_test_tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig tiny_config(const fs::path& out_dir, int videos_per_kind = 3) {
    ExperimentConfig cfg = aga::default_config();
    cfg.suite.num_track_videos = videos_per_kind;
    cfg.suite.num_swap_videos = videos_per_kind;
    cfg.suite.seed = 4242;
    cfg.suite.scenario.frames = 8;
    cfg.suite.scenario.resolutions = {200};
    cfg.suite.scenario.embed_dim = 8;
    cfg.suite.scenario.mask_scale = 0.5;
    cfg.out_dir = out_dir;
    return cfg;
}

std::map<std::string, std::string> dir_contents(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream body;
        body << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = body.str();
    }
    return files;
}

const aga::ReportCell* cell_of(const AggregateReport& report, const std::string& variant,
                               const std::string& kind) {
    for (const auto& cell : report.cells) {
        if (cell.variant == variant && cell.kind == kind) return &cell;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("config files override defaults and flags override files") {
    const fs::path dir = tmp_dir("config");
    {
        std::ofstream out(dir / "exp.json");
        out << R"({"suite": {"num_track_videos": 4, "seed": 7},
                   "simulator": {"alpha_loc": 0.5},
                   "variants": [{"name": "only", "window": 2, "lambda_app": 0.0}],
                   "jobs": 2})";
    }
    ExperimentConfig cfg = aga::load_config(dir / "exp.json");
    CHECK(cfg.suite.num_track_videos == 4);
    CHECK(cfg.suite.num_swap_videos == 500);  // untouched default
    CHECK(cfg.suite.seed == 7);
    CHECK(cfg.simulator.alpha_loc == 0.5);
    REQUIRE(cfg.variants.size() == 1);
    CHECK(cfg.variants[0].tracker.window == 2);
    CHECK(cfg.jobs == 2);

    aga::CliOverrides overrides;
    overrides.seed = 99;
    overrides.kind = "swap";
    aga::apply_overrides(cfg, overrides);
    CHECK(cfg.suite.seed == 99);
    CHECK(cfg.kind_filter == "swap");
}

TEST_CASE("unknown config keys and variants are rejected") {
    const fs::path dir = tmp_dir("config_bad");
    {
        std::ofstream out(dir / "bad.json");
        out << R"({"suite": {"nuum_track_videos": 4}})";
    }
    CHECK_THROWS_AS(aga::load_config(dir / "bad.json"), ConfigError);

    ExperimentConfig cfg = aga::default_config();
    aga::CliOverrides overrides;
    overrides.variants = std::vector<std::string>{"does-not-exist"};
    CHECK_THROWS_AS(aga::apply_overrides(cfg, overrides), ConfigError);
}

TEST_CASE("generate, track and evaluate complete end to end") {
    const fs::path dir = tmp_dir("pipeline");
    ExperimentConfig cfg = tiny_config(dir / "out");
    cfg.jobs = 2;

    cmd_generate(cfg);
    CHECK(fs::exists(cfg.out_dir / "dataset" / "manifest.json"));
    CHECK(fs::exists(cfg.out_dir / "dataset" / "videos" / "track-0000.jsonl"));
    CHECK(fs::exists(cfg.out_dir / "dataset" / "videos" / "swap-0002.jsonl"));

    cmd_track(cfg);
    CHECK(fs::exists(cfg.out_dir / "tracks" / "full" / "swap-0001.jsonl"));

    const AggregateReport report = cmd_evaluate(cfg);
    CHECK(fs::exists(cfg.out_dir / "reports" / "aggregate.json"));
    CHECK(fs::exists(cfg.out_dir / "reports" / "aggregate.csv"));
    CHECK(fs::exists(cfg.out_dir / "reports" / "per_video.csv"));

    const auto* full_track = cell_of(report, "full", "track");
    REQUIRE(full_track != nullptr);
    CHECK(full_track->videos == 3);
    CHECK(full_track->has_ap);
    CHECK(full_track->accuracy >= 0.0);
    CHECK(full_track->accuracy <= 1.0);

    // every (variant, kind) cell is present
    for (const auto& variant : cfg.variants) {
        CHECK(cell_of(report, variant.name, "track") != nullptr);
        CHECK(cell_of(report, variant.name, "swap") != nullptr);
    }
}

TEST_CASE("the full pipeline is byte-identical across runs and worker counts") {
    const fs::path dir = tmp_dir("determinism");
    ExperimentConfig first = tiny_config(dir / "run1", 2);
    first.jobs = 1;
    ExperimentConfig second = tiny_config(dir / "run2", 2);
    second.jobs = 3;

    for (ExperimentConfig* cfg : {&first, &second}) {
        cmd_generate(*cfg);
        cmd_track(*cfg);
        cmd_evaluate(*cfg);
    }

    const auto files1 = dir_contents(dir / "run1");
    const auto files2 = dir_contents(dir / "run2");
    REQUIRE(files1.size() == files2.size());
    for (const auto& [name, body] : files1) {
        REQUIRE(files2.contains(name));
        REQUIRE(files2.at(name) == body);
    }
}

TEST_CASE("kind filter restricts generation and evaluation") {
    const fs::path dir = tmp_dir("kind_filter");
    ExperimentConfig cfg = tiny_config(dir / "out", 2);
    cfg.kind_filter = "swap";
    cmd_generate(cfg);
    CHECK_FALSE(fs::exists(cfg.out_dir / "dataset" / "videos" / "track-0000.jsonl"));
    cmd_track(cfg);
    const AggregateReport report = cmd_evaluate(cfg);
    CHECK(cell_of(report, "full", "track") == nullptr);
    CHECK(cell_of(report, "full", "swap") != nullptr);
}

TEST_CASE("track errors when scenario files are missing") {
    const fs::path dir = tmp_dir("missing_videos");
    ExperimentConfig cfg = tiny_config(dir / "out", 2);
    cmd_generate(cfg);
    fs::remove(cfg.out_dir / "dataset" / "videos" / "swap-0001.jsonl");
    try {
        cmd_track(cfg);
        FAIL("expected an error listing the missing video");
    } catch (const aga::IoError& e) {
        CHECK(e.error_class() == "file_missing");
        CHECK(std::string(e.what()).find("swap-0001") != std::string::npos);
    }
}

TEST_CASE("window sweep emits the long-format table") {
    const fs::path dir = tmp_dir("sweep");
    ExperimentConfig cfg = tiny_config(dir / "out", 2);
    cmd_generate(cfg);
    const AggregateReport report = cmd_sweep(cfg, {1, 5});
    CHECK(cell_of(report, "w1", "swap") != nullptr);
    CHECK(cell_of(report, "w5", "swap") != nullptr);

    std::ifstream in(cfg.out_dir / "reports" / "window_sweep.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "window,kind,videos,accuracy,id_switches");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 4);  // 2 windows x 2 kinds
}

#ifdef AGA_BIN
namespace {

std::pair<int, std::string> run_command(const std::string& command) {
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buffer[256];
    while (fgets(buffer, sizeof(buffer), pipe) != nullptr) output += buffer;
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::pair<int, std::string> run_cli(const std::string& args) {
    return run_command(std::string(AGA_BIN) + " " + args);
}

}  // namespace

TEST_CASE("the CLI runs the pipeline and reports typed errors") {
    const fs::path dir = tmp_dir("cli");
    const std::string out_flag = " --out " + (dir / "out").string();

    auto [gen_code, gen_out] =
        run_cli("generate" + out_flag + " --seed 5 --kind swap --jobs 2");
    CHECK(gen_code == 0);

    // config errors carry a machine-parsable class on one line
    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"suite": {"frames": "many"}})";
    }
    auto [bad_code, bad_out] = run_cli("generate --config " + (dir / "bad.json").string());
    CHECK(bad_code != 0);
    CHECK(bad_out.find("error[") != std::string::npos);
    CHECK(bad_out.find('\n') == bad_out.size() - 1);  // single line

    // evaluating before tracking fails with a typed error
    auto [eval_code, eval_out] = run_cli("evaluate" + out_flag + " --kind swap");
    CHECK(eval_code != 0);
    CHECK(eval_out.find("error[file_missing]") != std::string::npos);

    auto [track_code, track_out] =
        run_cli("track" + out_flag + " --seed 5 --kind swap --variant full,no-app");
    CHECK(track_code == 0);
    auto [eval2_code, eval2_out] =
        run_cli("evaluate" + out_flag + " --seed 5 --kind swap --variant full,no-app");
    CHECK(eval2_code == 0);
    CHECK(fs::exists(dir / "out" / "reports" / "aggregate.json"));
}

TEST_CASE("AGA_LOG controls verbosity") {
    const fs::path dir = tmp_dir("cli_log");
    const std::string invoke = std::string(AGA_BIN) + " generate --out " +
                               (dir / "out").string() + " --seed 3 --kind swap";

    auto [info_code, info_out] = run_command("env -u AGA_LOG " + invoke);
    CHECK(info_code == 0);
    CHECK(info_out.find("[info]") != std::string::npos);

    auto [warn_code, warn_out] = run_command("env AGA_LOG=warn " + invoke);
    CHECK(warn_code == 0);
    CHECK(warn_out.find("[info]") == std::string::npos);

    auto [debug_code, debug_out] = run_command("env AGA_LOG=debug " + invoke);
    CHECK(debug_code == 0);
    CHECK(debug_out.find("[debug]") != std::string::npos);
}
#endif
