// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/appearance_pool.hpp"

namespace aga {

namespace {

void check_shapes(const FeatureMap& f, const InstanceMask& m) {
    require(f.height >= 1 && f.width >= 1, "masked_average_pool: empty feature map");
    require(f.values.rows() == static_cast<Eigen::Index>(f.height) * f.width,
            "masked_average_pool: feature map storage does not match H*W");
    require(m.height() == f.height && m.width() == f.width,
            "masked_average_pool: mask shape does not match feature map");
    require(f.values.allFinite(), "masked_average_pool: non-finite feature value");
    require((m.weights.array() >= 0.0).all() && (m.weights.array() <= 1.0).all(),
            "masked_average_pool: mask weights must lie in [0, 1]");
}

}  // namespace

Eigen::VectorXd masked_average_pool(const FeatureMap& f, const InstanceMask& m,
                                    bool binarize) {
    check_shapes(f, m);

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(f.channels());
    double total = 0.0;
    for (int r = 0; r < f.height; ++r) {
        for (int c = 0; c < f.width; ++c) {
            double w = m.weights(r, c);
            if (binarize) w = (w >= 0.5) ? 1.0 : 0.0;
            if (w == 0.0) continue;
            acc += w * f.values.row(f.pixel(r, c)).transpose();
            total += w;
        }
    }
    if (total == 0.0) return Eigen::VectorXd::Zero(f.channels());
    return acc / total;
}

EmbeddingSet pool_all_instances(const FeatureMap& f, const std::vector<InstanceMask>& masks,
                                bool binarize) {
    require(!masks.empty(), "pool_all_instances: no masks");

    Eigen::MatrixXd rows(static_cast<Eigen::Index>(masks.size()), f.channels());
    for (std::size_t k = 0; k < masks.size(); ++k) {
        rows.row(static_cast<Eigen::Index>(k)) =
            masked_average_pool(f, masks[k], binarize).transpose();
    }
    return EmbeddingSet(std::move(rows));
}

}  // namespace aga
