// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "aga/rle.hpp"
#include "aga/types.hpp"

namespace aga {

/// Per-frame detector output: one entry per detection, in arbitrary
/// (per-frame shuffled) order. Masks and ground-truth ids are optional;
/// gt_ids exist only for evaluation and never influence tracking.
struct FrameDetections {
    int frame_index = 0;  // 1-based, strictly increasing within a video
    EmbeddingSet e_obj;
    EmbeddingSet e_app;
    Eigen::VectorXd conf;           // per detection, in [0, 1]
    std::vector<int> class_ids;     // per detection
    std::vector<RleMask> masks;     // per detection; empty for embedding-level runs
    std::vector<int> gt_ids;        // hidden ground-truth ids; empty if unknown

    Eigen::Index n() const { return e_obj.n(); }
    Eigen::Index dim() const { return e_obj.dim(); }
};

}  // namespace aga
