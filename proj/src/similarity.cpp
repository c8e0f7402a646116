// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/similarity.hpp"

namespace aga {

namespace {

// Rows scaled to unit norm; zero-norm rows stay zero.
Eigen::MatrixXd normalized_rows(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm > 0.0) {
            out.row(i) = m.row(i) / norm;
        } else {
            out.row(i).setZero();
        }
    }
    return out;
}

}  // namespace

ScoreMatrix cosine_similarity_matrix(const EmbeddingSet& a, const EmbeddingSet& b) {
    require(a.n() >= 1 && a.dim() >= 1, "cosine_similarity_matrix: empty embedding set");
    require(a.dim() == b.dim(), "cosine_similarity_matrix: dimension mismatch");
    require(a.n() == b.n(), "cosine_similarity_matrix: slot count mismatch");
    require(a.vectors.allFinite() && b.vectors.allFinite(),
            "cosine_similarity_matrix: non-finite embedding");

    return normalized_rows(a.vectors) * normalized_rows(b.vectors).transpose();
}

ScoreMatrix fuse_scores(const ScoreMatrix& s_obj, const ScoreMatrix& s_app,
                        const FusionWeights& w) {
    require(s_obj.rows() == s_app.rows() && s_obj.cols() == s_app.cols(),
            "fuse_scores: shape mismatch");
    require(w.lambda_obj >= 0.0 && w.lambda_app >= 0.0,
            "fuse_scores: weights must be non-negative");
    require(w.lambda_obj > 0.0 || w.lambda_app > 0.0,
            "fuse_scores: weights must not both be zero");

    return w.lambda_obj * s_obj + w.lambda_app * s_app;
}

}  // namespace aga
