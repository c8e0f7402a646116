// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "aga/detections.hpp"
#include "aga/metrics.hpp"
#include "aga/scenario.hpp"
#include "aga/tracker.hpp"

namespace aga {

inline constexpr int kFormatVersion = 1;

/// Typed IO failure carrying a machine-readable class and the 1-based line
/// number where the problem was detected (0 for whole-file problems).
class IoError : public std::runtime_error {
  public:
    IoError(std::string error_class, std::size_t line, const std::string& msg)
        : std::runtime_error(msg), error_class_(std::move(error_class)), line_(line) {}

    const std::string& error_class() const { return error_class_; }
    std::size_t line() const { return line_; }

  private:
    std::string error_class_;
    std::size_t line_;
};

/// Everything one scenario file holds: the sampled video, its rasterized
/// ground truth, and the simulated detections (per-frame shuffled order).
struct ScenarioData {
    Scenario scenario;
    GroundTruth gt;
    std::vector<FrameDetections> detections;
};

// JSON-lines, canonical form: sorted keys, shortest round-trip floats, one
// header line followed by one line per frame. Writing the same data twice
// produces byte-identical files.
void write_scenario(const std::filesystem::path& path, const ScenarioData& data);
ScenarioData read_scenario(const std::filesystem::path& path);

struct TrackFileData {
    TrackOutput output;  // masks are not stored; re-join via gt ids if needed
    std::string variant;
    TrackerConfig config;
};

void write_track_output(const std::filesystem::path& path, const TrackOutput& output,
                        const std::string& variant, const TrackerConfig& config);
TrackFileData read_track_output(const std::filesystem::path& path);

struct ManifestEntry {
    std::string video_id;
    std::string kind;  // "track" | "swap"
    std::uint64_t seed = 0;
    std::string file;  // relative to the manifest directory
};

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

/// One (variant, kind) aggregate cell of an evaluation run.
struct ReportCell {
    std::string variant;
    std::string kind;
    int videos = 0;
    double accuracy = 0.0;
    long id_switches = 0;
    bool has_ap = false;
    ApResult ap;
};

/// Number of videos on which two variants emitted different assignments.
struct OutputDiff {
    std::string variant_a;
    std::string variant_b;
    int videos_differing = 0;
};

struct PerVideoRow {
    std::string variant;
    VideoReport video;
};

struct AggregateReport {
    std::vector<ReportCell> cells;
    std::vector<OutputDiff> output_diffs;
    std::vector<PerVideoRow> per_video;
};

/// Writes aggregate.json, aggregate.csv and per_video.csv into `dir`.
void write_report(const std::filesystem::path& dir, const AggregateReport& report);
AggregateReport read_report(const std::filesystem::path& json_path);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double x);

}  // namespace aga
