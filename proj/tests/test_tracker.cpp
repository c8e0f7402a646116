// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aga/assignment.hpp"
#include "aga/rng.hpp"
#include "aga/tracker.hpp"

using aga::EmbeddingSet;
using aga::FrameDetections;
using aga::FusionWeights;
using aga::Rng;
using aga::TrackerConfig;
using aga::TrackOutput;
using aga::track_video;
using aga::track_video_object_only;

namespace {

FrameDetections frame_from(int index, const Eigen::MatrixXd& e_obj, const Eigen::MatrixXd& e_app,
                           double conf = 1.0) {
    FrameDetections det;
    det.frame_index = index;
    det.e_obj = EmbeddingSet(e_obj);
    det.e_app = EmbeddingSet(e_app);
    det.conf = Eigen::VectorXd::Constant(e_obj.rows(), conf);
    det.class_ids.resize(e_obj.rows());
    std::iota(det.class_ids.begin(), det.class_ids.end(), 0);
    det.gt_ids.resize(e_obj.rows());
    std::iota(det.gt_ids.begin(), det.gt_ids.end(), 0);
    return det;
}

Eigen::MatrixXd one_hot_rows(int n, int dim) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, dim);
    for (int i = 0; i < n; ++i) m(i, i % dim) = 1.0;
    return m;
}

std::vector<FrameDetections> random_video(Rng& rng, int frames, int n, int dim) {
    std::vector<FrameDetections> video;
    for (int f = 1; f <= frames; ++f) {
        Eigen::MatrixXd e_obj(n, dim), e_app(n, dim);
        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < dim; ++d) {
                e_obj(i, d) = rng.normal();
                e_app(i, d) = rng.normal();
            }
        }
        FrameDetections det = frame_from(f, e_obj, e_app);
        for (Eigen::Index i = 0; i < det.conf.size(); ++i) det.conf[i] = rng.uniform();
        video.push_back(std::move(det));
    }
    return video;
}

bool same_outputs(const TrackOutput& a, const TrackOutput& b) {
    if (a.frames.size() != b.frames.size()) return false;
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        if (a.frames[f].slot_to_detection != b.frames[f].slot_to_detection) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("a single-frame video passes through with the identity assignment") {
    const Eigen::MatrixXd e = one_hot_rows(3, 3);
    const TrackOutput out = track_video({frame_from(1, e, e)}, {}, "v");
    REQUIRE(out.frames.size() == 1);
    CHECK(out.frames[0].slot_to_detection == std::vector<int>{0, 1, 2});
    CHECK(out.frames[0].fused_scores.size() == 0);
    CHECK(out.frames[0].class_ids == std::vector<int>{0, 1, 2});
}

TEST_CASE("a permutation of distinct embeddings is recovered") {
    const int n = 4;
    const Eigen::MatrixXd base_obj = one_hot_rows(n, n);
    Eigen::MatrixXd base_app(n, n);
    Rng rng(2);
    for (int i = 0; i < n * n; ++i) base_app.data()[i] = rng.normal();

    const std::vector<int> pi = {2, 0, 3, 1};  // detection i carries former slot pi[i]
    Eigen::MatrixXd perm_obj(n, n), perm_app(n, n);
    for (int i = 0; i < n; ++i) {
        perm_obj.row(i) = base_obj.row(pi[i]);
        perm_app.row(i) = base_app.row(pi[i]);
    }

    const std::vector<FrameDetections> video = {frame_from(1, base_obj, base_app),
                                                frame_from(2, perm_obj, perm_app)};
    const TrackOutput out = track_video(video, {}, "v");

    // detection i belongs in slot pi[i]; emitted slot k holds detection with pi == k
    const aga::AssignmentResult oracle = aga::brute_force_assignment(out.frames[1].fused_scores);
    for (int i = 0; i < n; ++i) {
        CHECK(oracle.permutation[i] == pi[i]);
        CHECK(out.frames[1].slot_to_detection[pi[i]] == i);
    }
}

TEST_CASE("appearance rescues the crossing scenario that object scores get wrong") {
    // exact cosine construction: cos(d_i, m_j) hits the target matrix entries
    Eigen::MatrixXd first_obj = Eigen::MatrixXd::Zero(2, 4);
    first_obj(0, 0) = 1.0;
    first_obj(1, 1) = 1.0;
    Eigen::MatrixXd first_app = first_obj;

    const double rest = std::sqrt(1.0 - 0.2 * 0.2 - 0.8 * 0.8);  // unit-norm filler
    Eigen::MatrixXd second_obj(2, 4);
    second_obj << 0.2, 0.8, rest, 0.0, 0.8, 0.2, 0.0, rest;
    const double rest_app = std::sqrt(1.0 - 0.9 * 0.9 - 0.1 * 0.1);
    Eigen::MatrixXd second_app(2, 4);
    second_app << 0.9, 0.1, rest_app, 0.0, 0.1, 0.9, 0.0, rest_app;

    const std::vector<FrameDetections> video = {frame_from(1, first_obj, first_app),
                                                frame_from(2, second_obj, second_app)};

    const TrackOutput fused = track_video(video, {}, "v");
    CHECK(fused.frames[1].slot_to_detection == std::vector<int>{0, 1});
    CHECK(fused.frames[1].fused_scores(0, 0) == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(fused.frames[1].fused_scores(0, 1) == doctest::Approx(0.9).epsilon(1e-12));

    const TrackOutput object_only = track_video_object_only(video, {}, "v");
    CHECK(object_only.frames[1].slot_to_detection == std::vector<int>{1, 0});
}

TEST_CASE("object-only tracking recovers a permutation despite random appearance") {
    const int n = 4;
    const Eigen::MatrixXd base_obj = one_hot_rows(n, n);
    Rng rng(12);
    const std::vector<int> pi = {3, 1, 0, 2};

    Eigen::MatrixXd perm_obj(n, n);
    for (int i = 0; i < n; ++i) perm_obj.row(i) = base_obj.row(pi[i]);
    auto noise_rows = [&] {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n * n; ++i) m.data()[i] = rng.normal();
        return m;
    };

    const std::vector<FrameDetections> video = {frame_from(1, base_obj, noise_rows()),
                                                frame_from(2, perm_obj, noise_rows())};
    const TrackOutput out = track_video_object_only(video, {}, "v");
    for (int i = 0; i < n; ++i) CHECK(out.frames[1].slot_to_detection[pi[i]] == i);
}

TEST_CASE("object-only wrapper equals explicit zero appearance weight") {
    Rng rng(3);
    const auto video = random_video(rng, 6, 3, 5);
    TrackerConfig explicit_cfg;
    explicit_cfg.fusion = FusionWeights{1.0, 0.0};
    CHECK(same_outputs(track_video_object_only(video, {}, "v"),
                       track_video(video, explicit_cfg, "v")));
}

TEST_CASE("prefix property: outputs at frame t depend only on frames up to t") {
    Rng rng(4);
    const auto video = random_video(rng, 8, 3, 4);
    for (const bool literal : {false, true}) {
        TrackerConfig cfg;
        cfg.literal_order = literal;
        const TrackOutput full = track_video(video, cfg, "v");
        const std::vector<FrameDetections> prefix(video.begin(), video.begin() + 5);
        const TrackOutput part = track_video(prefix, cfg, "v");
        for (std::size_t f = 0; f < part.frames.size(); ++f) {
            REQUIRE(part.frames[f].slot_to_detection == full.frames[f].slot_to_detection);
        }
    }
}

TEST_CASE("every output frame is a permutation of its input detections") {
    Rng rng(5);
    const auto video = random_video(rng, 10, 3, 4);
    const TrackOutput out = track_video(video, {}, "v");
    for (const auto& frame : out.frames) {
        std::vector<int> sorted = frame.slot_to_detection;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{0, 1, 2});
    }
}

TEST_CASE("tracking is deterministic") {
    Rng rng(6);
    const auto video = random_video(rng, 7, 3, 4);
    const TrackOutput a = track_video(video, {}, "v");
    const TrackOutput b = track_video(video, {}, "v");
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        CHECK(a.frames[f].slot_to_detection == b.frames[f].slot_to_detection);
        CHECK(a.frames[f].fused_scores == b.frames[f].fused_scores);
        CHECK(a.frames[f].conf == b.frames[f].conf);
    }
}

TEST_CASE("a single instance is always assigned to its only slot") {
    Rng rng(7);
    const auto video = random_video(rng, 12, 1, 4);
    const TrackOutput out = track_video(video, {}, "v");
    for (const auto& frame : out.frames) {
        CHECK(frame.slot_to_detection == std::vector<int>{0});
    }
}

TEST_CASE("disabling the memory bank equals a window of one") {
    Rng rng(8);
    const auto video = random_video(rng, 9, 3, 4);
    TrackerConfig no_mem;
    no_mem.window = 5;
    no_mem.use_memory = false;
    TrackerConfig w1;
    w1.window = 1;
    CHECK(same_outputs(track_video(video, no_mem, "v"), track_video(video, w1, "v")));
}

TEST_CASE("memory scale does not change assignments") {
    Rng rng(9);
    const auto video = random_video(rng, 8, 3, 4);
    const TrackOutput base = track_video(video, {}, "v");
    for (double scale : {1e-3, 1e3}) {
        TrackerConfig cfg;
        cfg.memory_scale = scale;
        CHECK(same_outputs(base, track_video(video, cfg, "v")));
    }
}

TEST_CASE("the literal ordering lags the assignment by one frame") {
    const int n = 2;
    const Eigen::MatrixXd base = one_hot_rows(n, n);
    Eigen::MatrixXd flipped(n, n);
    flipped.row(0) = base.row(1);
    flipped.row(1) = base.row(0);

    // frame 2 arrives permuted and stays permuted in frame 3
    const std::vector<FrameDetections> video = {
        frame_from(1, base, base), frame_from(2, flipped, flipped), frame_from(3, flipped, flipped)};

    TrackerConfig literal;
    literal.literal_order = true;
    const TrackOutput lagged = track_video(video, literal, "v");
    const TrackOutput causal = track_video(video, {}, "v");

    // the causal order reindexes frame 2 immediately; the literal order
    // pushes frame 2 under the stale identity idx, re-anchoring its memory to
    // the shuffled order, so the emitted stream never corrects
    CHECK(causal.frames[1].slot_to_detection == std::vector<int>{1, 0});
    CHECK(causal.frames[2].slot_to_detection == std::vector<int>{1, 0});
    CHECK(lagged.frames[1].slot_to_detection == std::vector<int>{0, 1});
    CHECK(lagged.frames[2].slot_to_detection == std::vector<int>{0, 1});
    CHECK_FALSE(same_outputs(lagged, causal));
}

TEST_CASE("contract violations") {
    CHECK_THROWS_AS(track_video({}, {}, "v"), std::invalid_argument);

    const Eigen::MatrixXd e2 = one_hot_rows(2, 4);
    const Eigen::MatrixXd e3 = one_hot_rows(3, 4);
    CHECK_THROWS_AS(track_video({frame_from(1, e2, e2), frame_from(2, e3, e3)}, {}, "v"),
                    std::invalid_argument);
    CHECK_THROWS_AS(track_video({frame_from(2, e2, e2), frame_from(1, e2, e2)}, {}, "v"),
                    std::invalid_argument);

    TrackerConfig bad;
    bad.window = 0;
    CHECK_THROWS_AS(track_video({frame_from(1, e2, e2)}, bad, "v"), std::invalid_argument);
}
