// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "aga/detections.hpp"
#include "aga/similarity.hpp"

namespace aga {

struct TrackerConfig {
    int window = 5;            // memory bank size W
    bool use_memory = true;    // off forces W = 1 (previous-frame matching)
    FusionWeights fusion{};    // (1, 0) = object-only ablation
    bool literal_order = false;  // run the push/emit-before-assign ordering
    double memory_scale = 1.0;   // diagnostic multiplier on the memory readout

    int effective_window() const { return use_memory ? window : 1; }
};

/// One tracked frame: the slot->detection permutation actually used to emit
/// predictions, the fused score matrix it came from (empty when no matching
/// happened), and the slot-ordered predictions.
struct TrackFrame {
    int frame_index = 0;
    std::vector<int> slot_to_detection;
    ScoreMatrix fused_scores;  // 0x0 when this frame had no matching step

    // Predictions reindexed into slot order.
    std::vector<int> class_ids;
    Eigen::VectorXd conf;
    std::vector<RleMask> masks;  // empty if the input had no masks
    std::vector<int> gt_ids;     // empty if the input had no hidden ids
};

struct TrackOutput {
    std::string video_id;
    int n = 0;
    std::vector<TrackFrame> frames;
};

/// The online association loop: per frame, score current detections against
/// the memory readout, assign with the Hungarian solver, emit reindexed
/// predictions, push track-aligned state. Deterministic for fixed input and
/// config. With cfg.literal_order the push and emit happen before the
/// assignment of the current frame (one-frame lag).
TrackOutput track_video(const std::vector<FrameDetections>& frames, const TrackerConfig& cfg = {},
                        std::string video_id = {});

/// track_video with fusion weights (1, 0): the appearance-free ablation.
TrackOutput track_video_object_only(const std::vector<FrameDetections>& frames,
                                    TrackerConfig cfg = {}, std::string video_id = {});

}  // namespace aga
