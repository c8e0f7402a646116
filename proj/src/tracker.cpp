// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/tracker.hpp"

#include <numeric>

#include "aga/assignment.hpp"
#include "aga/memory_bank.hpp"

namespace aga {

namespace {

void check_frames(const std::vector<FrameDetections>& frames) {
    require(!frames.empty(), "track_video: empty frame sequence");
    const Eigen::Index n = frames.front().n();
    const Eigen::Index dim = frames.front().dim();
    require(n >= 1 && dim >= 1, "track_video: empty detections");
    int last_index = 0;
    for (const FrameDetections& f : frames) {
        require(f.frame_index > last_index, "track_video: frame indices must strictly increase");
        last_index = f.frame_index;
        require(f.n() == n && f.dim() == dim, "track_video: detection count/dim changed mid-video");
        require(f.e_app.n() == n && f.e_app.dim() == dim, "track_video: e_app shape mismatch");
        require(f.conf.size() == n, "track_video: confidence size mismatch");
        require(f.class_ids.size() == static_cast<std::size_t>(n),
                "track_video: class id count mismatch");
        require(f.masks.empty() || f.masks.size() == static_cast<std::size_t>(n),
                "track_video: mask count mismatch");
        require(f.gt_ids.empty() || f.gt_ids.size() == static_cast<std::size_t>(n),
                "track_video: gt id count mismatch");
    }
}

// Gather detections into slot order. slot_to_detection[k] names the
// detection emitted as slot k.
void emit_frame(const FrameDetections& det, const std::vector<int>& slot_to_detection,
                ScoreMatrix fused, TrackOutput& out) {
    const int n = static_cast<int>(det.n());
    TrackFrame frame;
    frame.frame_index = det.frame_index;
    frame.slot_to_detection = slot_to_detection;
    frame.fused_scores = std::move(fused);
    frame.class_ids.resize(n);
    frame.conf.resize(n);
    if (!det.masks.empty()) frame.masks.resize(n);
    if (!det.gt_ids.empty()) frame.gt_ids.resize(n);
    for (int slot = 0; slot < n; ++slot) {
        const int d = slot_to_detection[slot];
        frame.class_ids[slot] = det.class_ids[d];
        frame.conf[slot] = det.conf[d];
        if (!det.masks.empty()) frame.masks[slot] = det.masks[d];
        if (!det.gt_ids.empty()) frame.gt_ids[slot] = det.gt_ids[d];
    }
    out.frames.push_back(std::move(frame));
}

EmbeddingSet gather_rows(const EmbeddingSet& e, const std::vector<int>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), e.dim());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        m.row(static_cast<Eigen::Index>(k)) = e.vectors.row(rows[k]);
    }
    return EmbeddingSet(std::move(m));
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[rows[k]];
    return out;
}

std::vector<int> invert(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (int i = 0; i < static_cast<int>(perm.size()); ++i) inv[perm[i]] = i;
    return inv;
}

ScoreMatrix fused_against_memory(const FrameDetections& det, const MemoryBank& bank,
                                 const TrackerConfig& cfg) {
    MemoryReadout memory = bank.read_memory();
    if (cfg.memory_scale != 1.0) {
        memory.m_obj.vectors *= cfg.memory_scale;
        memory.m_app.vectors *= cfg.memory_scale;
    }
    const ScoreMatrix s_obj = cosine_similarity_matrix(det.e_obj, memory.m_obj);
    const ScoreMatrix s_app = cosine_similarity_matrix(det.e_app, memory.m_app);
    return fuse_scores(s_obj, s_app, cfg.fusion);
}

}  // namespace

TrackOutput track_video(const std::vector<FrameDetections>& frames, const TrackerConfig& cfg,
                        std::string video_id) {
    check_frames(frames);
    require(cfg.window >= 1, "track_video: window must be >= 1");
    require(cfg.memory_scale > 0.0, "track_video: memory_scale must be positive");

    const int n = static_cast<int>(frames.front().n());
    const Eigen::Index dim = frames.front().dim();

    TrackOutput out;
    out.video_id = std::move(video_id);
    out.n = n;
    out.frames.reserve(frames.size());

    MemoryBank bank(cfg.effective_window(), n, dim);
    std::vector<int> idx(n);  // slot -> detection
    std::iota(idx.begin(), idx.end(), 0);

    for (const FrameDetections& det : frames) {
        if (cfg.literal_order) {
            // Listing order: push and emit with the previous frame's idx,
            // then compute the next idx from a readout that already contains
            // this frame. The emitted stream lags the evidence by one frame.
            bank.push(gather_rows(det.e_obj, idx), gather_rows(det.e_app, idx),
                      gather(det.conf, idx));
            ScoreMatrix fused = fused_against_memory(det, bank, cfg);
            emit_frame(det, idx, fused, out);
            idx = invert(solve_assignment(fused).permutation);
        } else {
            // Causally coherent order: match against memory of strictly
            // earlier frames, then emit and push with the fresh assignment.
            ScoreMatrix fused;
            if (!bank.empty()) {
                fused = fused_against_memory(det, bank, cfg);
                idx = invert(solve_assignment(fused).permutation);
            }
            emit_frame(det, idx, fused, out);
            bank.push(gather_rows(det.e_obj, idx), gather_rows(det.e_app, idx),
                      gather(det.conf, idx));
        }
    }

    return out;
}

TrackOutput track_video_object_only(const std::vector<FrameDetections>& frames, TrackerConfig cfg,
                                    std::string video_id) {
    cfg.fusion = FusionWeights{1.0, 0.0};
    return track_video(frames, cfg, std::move(video_id));
}

}  // namespace aga
