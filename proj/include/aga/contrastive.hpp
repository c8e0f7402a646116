// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "aga/types.hpp"

namespace aga {

/// A key embedding with its positive and negative reference embeddings.
struct ContrastivePair {
    Eigen::VectorXd key;
    std::vector<Eigen::VectorXd> positives;  // at least one
    std::vector<Eigen::VectorXd> negatives;  // may be empty
};

/// Loss value with exact analytic gradients for every input embedding.
struct LossReport {
    double value = 0.0;
    Eigen::VectorXd grad_key;
    std::vector<Eigen::VectorXd> grad_positives;
    std::vector<Eigen::VectorXd> grad_negatives;
};

/// Bidirectional-softmax contrastive loss
///
///   L = log(1 + sum over negatives n, positives p of exp(v.kn - v.kp))
///
/// with v the key. Evaluated in log-sum-exp stabilized form, so large
/// embedding magnitudes do not overflow. L = 0 when the negative set is
/// empty.
LossReport contrastive_loss(const ContrastivePair& p);

/// Central finite differences on every coordinate against the analytic
/// gradient. Returns the max relative error, with the denominator floored at
/// 1 so near-zero gradients are compared absolutely.
double gradient_check(const ContrastivePair& p, double eps);

struct RefineOptions {
    int steps = 200;
    double lr = 0.05;
    double loss_weight = 2.0;  // multiplier applied to the mean loss
    int refs_per_key = 0;      // sampled positives/negatives per key; 0 = use all
    std::uint64_t seed = 0;
};

struct RefineResult {
    std::vector<Eigen::VectorXd> embeddings;
    double silhouette_before = 0.0;
    double silhouette_after = 0.0;
    double final_loss = 0.0;
};

/// Gradient descent on the mean contrastive loss over labeled embeddings.
/// Requires at least two identities with at least two samples each.
RefineResult refine_embeddings(const std::vector<Eigen::VectorXd>& embeddings,
                               const std::vector<int>& labels,
                               const RefineOptions& opt = {});

/// Mean silhouette score under cosine distance; in [-1, 1], higher is more
/// separable.
double cosine_silhouette(const std::vector<Eigen::VectorXd>& embeddings,
                         const std::vector<int>& labels);

}  // namespace aga
