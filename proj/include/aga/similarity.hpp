// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "aga/types.hpp"

namespace aga {

/// Weights for combining the object and appearance similarity matrices.
/// The defaults (1, 1) give the plain unweighted sum; (1, 0) is the
/// object-only ablation path.
struct FusionWeights {
    double lambda_obj = 1.0;
    double lambda_app = 1.0;
};

/// Pairwise cosine similarity: entry (i, j) = cos(a_i, b_j). A zero-norm
/// vector on either side yields 0 for its entries (neutral score).
ScoreMatrix cosine_similarity_matrix(const EmbeddingSet& a, const EmbeddingSet& b);

/// Elementwise lambda_obj * s_obj + lambda_app * s_app.
ScoreMatrix fuse_scores(const ScoreMatrix& s_obj, const ScoreMatrix& s_app,
                        const FusionWeights& w = {});

}  // namespace aga
