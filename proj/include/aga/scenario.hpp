// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aga/rle.hpp"
#include "aga/types.hpp"

namespace aga {

/// Cubic Bezier curve in normalized scene coordinates.
struct BezierTrajectory {
    std::array<Eigen::Vector2d, 4> control;
};

/// De Casteljau evaluation at t in [0, 1].
Eigen::Vector2d eval_bezier(const BezierTrajectory& b, double t);

enum class ScenarioKind { Track, Swap };
enum class SwapMode { Permanent, Momentary };

struct InstanceSpec {
    int id = 0;
    int class_id = 0;
    Eigen::Vector2d axes_px = {0.0, 0.0};  // ellipse semi-axes, pixels
    int depth_rank = 0;                    // smaller = nearer, unique per video
    Eigen::VectorXd latent_appearance;     // unit norm
    BezierTrajectory trajectory;
};

/// A synthetic video: instances on Bezier trajectories, optionally with a
/// position swap of one pair at an intermediate frame.
struct Scenario {
    std::string video_id;
    ScenarioKind kind = ScenarioKind::Track;
    int frames = 36;
    int width = 600;
    int height = 600;
    double mask_scale = 0.25;  // mask raster resolution relative to the frame
    std::uint64_t seed = 0;
    std::vector<InstanceSpec> instances;
    // swap scenarios only
    int swap_frame = -1;  // first frame (1-based) with exchanged positions
    std::array<int, 2> swap_pair = {-1, -1};
    SwapMode swap_mode = SwapMode::Permanent;
};

struct FrameInstanceTruth {
    Eigen::Vector2d center = {0.0, 0.0};  // pixels; may lie outside the frame
    double visibility = 0.0;              // visible pixels / unoccluded ellipse pixels
    RleMask full_mask;                    // ellipse clipped to the frame
    RleMask visible_mask;                 // full_mask minus nearer instances
};

struct FrameTruth {
    int frame_index = 0;  // 1-based
    std::vector<FrameInstanceTruth> instances;
};

struct GroundTruth {
    std::vector<FrameTruth> frames;
};

struct ScenarioParams {
    int frames = 36;
    int min_instances = 2;
    int max_instances = 3;
    std::vector<int> resolutions = {600, 700, 800, 900};
    double margin = 0.2;        // allowed excursion outside the frame, per side
    double min_axis_frac = 0.06;  // ellipse semi-axis bounds, fraction of min(w, h)
    double max_axis_frac = 0.14;
    int embed_dim = 16;
    int num_classes = 21;
    double mask_scale = 0.25;
    SwapMode swap_mode = SwapMode::Permanent;
};

/// Instance center at a 1-based frame index, with any swap applied.
Eigen::Vector2d instance_center(const Scenario& sc, int instance, int frame_index);

/// Sample a scenario from a seed. Swap parameters come from an independent
/// substream, so track and swap scenarios with the same seed share instances
/// and trajectories exactly.
Scenario sample_scenario(std::uint64_t seed, ScenarioKind kind, const ScenarioParams& p = {});

/// Rasterize per-frame geometry: depth-resolved masks and visibilities.
GroundTruth build_ground_truth(const Scenario& sc);

std::pair<Scenario, GroundTruth> generate_scenario(std::uint64_t seed, ScenarioKind kind,
                                                   const ScenarioParams& p = {});

}  // namespace aga
