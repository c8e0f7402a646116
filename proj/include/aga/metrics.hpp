// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "aga/scenario.hpp"
#include "aga/tracker.hpp"

namespace aga {

/// matched[t][g] = predicted slot holding ground-truth instance g at frame t
/// (0-based frame positions). Uses hidden ids when the output carries them,
/// otherwise per-frame mask IoU matching.
std::vector<std::vector<int>> match_slots(const TrackOutput& pred, const GroundTruth& gt);

/// For each instance, +1 whenever its matched slot differs from the previous
/// frame's matched slot (first frame exempt).
int count_id_switches(const TrackOutput& pred, const GroundTruth& gt);

/// Fraction of (frame, instance) pairs after the anchor frame whose matched
/// slot equals the first-frame anchor mapping.
double association_accuracy(const TrackOutput& pred, const GroundTruth& gt);

struct ApResult {
    double ap = 0.0;    // mean precision over IoU thresholds 0.50:0.05:0.95, in [0, 100]
    double ap50 = 0.0;
    double ap75 = 0.0;
};

/// One predicted track reduced to what AP needs: its confidence score and
/// its whole-video 3D IoU against every ground-truth track of its video.
struct ApCandidate {
    double score = 0.0;  // mean per-frame confidence
    std::vector<double> iou_vs_gt;
};

/// Compute the 3D-IoU candidates for one video. Requires masks on both
/// sides.
std::vector<ApCandidate> ap_candidates(const TrackOutput& pred, const GroundTruth& gt);

/// Pool candidates across videos: greedy confidence-ordered matching per
/// IoU threshold, AP = mean precision over thresholds, scaled to [0, 100].
ApResult ap_from_candidates(const std::vector<std::vector<ApCandidate>>& per_video);

/// ap_candidates + ap_from_candidates over a collection of videos.
ApResult spatiotemporal_ap(const std::vector<const TrackOutput*>& preds,
                           const std::vector<const GroundTruth*>& gts);

/// Per-video evaluation summary.
struct VideoReport {
    std::string video_id;
    std::string kind;
    int frames = 0;
    int instances = 0;
    int id_switches = 0;
    double accuracy = 0.0;
};

/// Aggregate over one (variant, kind) cell.
struct TrackingReport {
    double association_accuracy = 0.0;  // mean of per-video accuracies
    long id_switches = 0;               // total over videos
    ApResult ap;
    bool has_ap = false;
    std::vector<VideoReport> per_video;
};

}  // namespace aga
