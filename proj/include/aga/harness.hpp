// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aga/dataset_io.hpp"
#include "aga/scenario.hpp"
#include "aga/simulate.hpp"
#include "aga/tracker.hpp"

namespace aga {

/// Configuration problem (bad file, bad value); reported as class
/// "config_error" by the CLI.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SuiteConfig {
    int num_track_videos = 500;
    int num_swap_videos = 500;
    std::uint64_t seed = 1;
    ScenarioParams scenario{};
};

struct VariantConfig {
    std::string name;
    TrackerConfig tracker{};
};

struct ExperimentConfig {
    SuiteConfig suite{};
    SimulatorParams simulator{};
    std::vector<VariantConfig> variants;
    std::filesystem::path out_dir = "out";
    int jobs = 1;
    std::string kind_filter = "both";  // track | swap | both
};

/// Default experiment: four tracker variants toggling appearance and memory,
/// plus the literal-ordering variant.
ExperimentConfig default_config();

/// JSON config file; unspecified fields keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

struct CliOverrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::vector<std::string>> variants;  // filter by name
    std::optional<std::string> kind;                   // track | swap | both
};

/// Flags win over config-file values.
void apply_overrides(ExperimentConfig& cfg, const CliOverrides& overrides);

// Paths inside an experiment directory.
std::filesystem::path dataset_dir(const ExperimentConfig& cfg);
std::filesystem::path manifest_path(const ExperimentConfig& cfg);
std::filesystem::path tracks_dir(const ExperimentConfig& cfg, const std::string& variant);
std::filesystem::path reports_dir(const ExperimentConfig& cfg);

/// Deterministic per-video seed within a suite.
std::uint64_t video_seed(std::uint64_t suite_seed, const std::string& kind, int index);

/// Generate the synthetic suite: one scenario file per video plus a
/// manifest. Deterministic per config; safe to parallelize.
void cmd_generate(const ExperimentConfig& cfg);

/// Run every configured tracker variant over the generated dataset.
void cmd_track(const ExperimentConfig& cfg);

/// Score tracked outputs against ground truth and write the report files.
AggregateReport cmd_evaluate(const ExperimentConfig& cfg);

/// Window-size sweep: track + evaluate fused variants at each window and
/// write window_sweep.csv. Returns (window, kind) accuracy cells.
AggregateReport cmd_sweep(const ExperimentConfig& cfg, const std::vector<int>& windows = {1, 2, 3,
                                                                                          5, 10});

/// Index-parallel helper (worker pool); results must be written to
/// pre-allocated slots so merge order is deterministic.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace aga
