// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "aga/types.hpp"

namespace aga {

/// Dense H x W x C feature map. Pixels are stored row-major, one pixel per
/// row of `values` (so `values` is (H*W) x C).
struct FeatureMap {
    int height = 0;
    int width = 0;
    Eigen::MatrixXd values;  // (height * width) x channels

    Eigen::Index channels() const { return values.cols(); }
    Eigen::Index pixel(int row, int col) const {
        return static_cast<Eigen::Index>(row) * width + col;
    }
};

/// Per-pixel instance weights in [0, 1]; binary or soft (sigmoid) masks.
struct InstanceMask {
    Eigen::MatrixXd weights;  // height x width

    int height() const { return static_cast<int>(weights.rows()); }
    int width() const { return static_cast<int>(weights.cols()); }
};

/// Mask-guided average pooling: q_c = sum_p m(p) f(p, c) / sum_p m(p).
/// An all-zero mask yields the zero vector, which scores neutrally under
/// cosine similarity. `binarize` thresholds soft weights at 0.5 first.
Eigen::VectorXd masked_average_pool(const FeatureMap& f, const InstanceMask& m,
                                    bool binarize = false);

/// Row k of the result is masked_average_pool(f, masks[k]).
EmbeddingSet pool_all_instances(const FeatureMap& f, const std::vector<InstanceMask>& masks,
                                bool binarize = false);

}  // namespace aga
