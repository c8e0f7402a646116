// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace aga {

/// A set of N row-vector embeddings of shared dimensionality.
struct EmbeddingSet {
    Eigen::MatrixXd vectors;  // n x dim, one embedding per row

    EmbeddingSet() = default;
    explicit EmbeddingSet(Eigen::MatrixXd m) : vectors(std::move(m)) {}

    Eigen::Index n() const { return vectors.rows(); }
    Eigen::Index dim() const { return vectors.cols(); }
};

/// Square similarity matrix: rows index current detections, columns index
/// track slots.
using ScoreMatrix = Eigen::MatrixXd;

// Precondition check; violations are programming errors at the call site.
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace aga
