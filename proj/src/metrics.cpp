// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "aga/assignment.hpp"

namespace aga {

namespace {

void check_aligned(const TrackOutput& pred, const GroundTruth& gt) {
    require(!pred.frames.empty(), "metrics: empty prediction");
    require(pred.frames.size() == gt.frames.size(), "metrics: frame count mismatch");
    for (std::size_t t = 0; t < gt.frames.size(); ++t) {
        require(static_cast<int>(gt.frames[t].instances.size()) == pred.n,
                "metrics: instance count mismatch");
    }
}

double mask_iou(const RleMask& a, const RleMask& b) {
    require(a.width == b.width && a.height == b.height, "metrics: mask shape mismatch");
    const std::vector<std::uint8_t> bits_a = rle_decode_bits(a);
    const std::vector<std::uint8_t> bits_b = rle_decode_bits(b);
    std::int64_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < bits_a.size(); ++i) {
        inter += bits_a[i] & bits_b[i];
        uni += bits_a[i] | bits_b[i];
    }
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

// Per-frame slot<->instance matching by mask IoU, resolved with the
// assignment solver so the mapping stays injective.
std::vector<int> match_frame_by_iou(const TrackFrame& frame,
                                    const std::vector<FrameInstanceTruth>& truth) {
    const int n = static_cast<int>(truth.size());
    ScoreMatrix iou(n, n);
    for (int g = 0; g < n; ++g) {
        for (int slot = 0; slot < n; ++slot) {
            iou(g, slot) = mask_iou(truth[g].visible_mask, frame.masks[slot]);
        }
    }
    return solve_assignment(iou).permutation;  // instance -> slot
}

}  // namespace

std::vector<std::vector<int>> match_slots(const TrackOutput& pred, const GroundTruth& gt) {
    check_aligned(pred, gt);

    const int n = pred.n;
    std::vector<std::vector<int>> matched(pred.frames.size(), std::vector<int>(n, -1));
    for (std::size_t t = 0; t < pred.frames.size(); ++t) {
        const TrackFrame& frame = pred.frames[t];
        if (!frame.gt_ids.empty()) {
            for (int slot = 0; slot < n; ++slot) {
                const int g = frame.gt_ids[slot];
                require(g >= 0 && g < n, "metrics: ground-truth id out of range");
                matched[t][g] = slot;
            }
        } else {
            require(!frame.masks.empty(),
                    "metrics: output carries neither hidden ids nor masks");
            const std::vector<int> instance_to_slot = match_frame_by_iou(frame, gt.frames[t].instances);
            for (int g = 0; g < n; ++g) matched[t][g] = instance_to_slot[g];
        }
    }
    return matched;
}

int count_id_switches(const TrackOutput& pred, const GroundTruth& gt) {
    const std::vector<std::vector<int>> matched = match_slots(pred, gt);
    int switches = 0;
    for (int g = 0; g < pred.n; ++g) {
        for (std::size_t t = 1; t < matched.size(); ++t) {
            if (matched[t][g] != matched[t - 1][g]) ++switches;
        }
    }
    return switches;
}

double association_accuracy(const TrackOutput& pred, const GroundTruth& gt) {
    const std::vector<std::vector<int>> matched = match_slots(pred, gt);
    if (matched.size() <= 1) return 1.0;  // nothing after the anchor frame
    long correct = 0;
    const long counted = static_cast<long>(matched.size() - 1) * pred.n;
    for (int g = 0; g < pred.n; ++g) {
        const int anchor = matched[0][g];
        for (std::size_t t = 1; t < matched.size(); ++t) {
            if (matched[t][g] == anchor) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(counted);
}

std::vector<ApCandidate> ap_candidates(const TrackOutput& pred, const GroundTruth& gt) {
    check_aligned(pred, gt);
    for (const TrackFrame& frame : pred.frames) {
        require(!frame.masks.empty(), "spatiotemporal_ap: prediction is missing masks");
    }

    // Word-packed mask tube, frames concatenated.
    auto pack_tube = [](const std::vector<const RleMask*>& frames) {
        std::vector<std::uint64_t> packed;
        for (const RleMask* mask : frames) {
            const std::vector<std::uint8_t> bits = rle_decode_bits(*mask);
            const std::size_t words = (bits.size() + 63) / 64;
            const std::size_t base = packed.size();
            packed.resize(base + words, 0);
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (bits[i]) packed[base + i / 64] |= std::uint64_t{1} << (i % 64);
            }
        }
        return packed;
    };
    auto tube_iou = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        require(a.size() == b.size(), "spatiotemporal_ap: mask shape mismatch");
        std::int64_t inter = 0, uni = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            inter += std::popcount(a[i] & b[i]);
            uni += std::popcount(a[i] | b[i]);
        }
        return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
    };

    const int n = pred.n;
    std::vector<std::vector<std::uint64_t>> pred_tubes(n), gt_tubes(n);
    for (int k = 0; k < n; ++k) {
        std::vector<const RleMask*> pred_frames, gt_frames;
        for (std::size_t t = 0; t < pred.frames.size(); ++t) {
            pred_frames.push_back(&pred.frames[t].masks[k]);
            gt_frames.push_back(&gt.frames[t].instances[k].visible_mask);
        }
        pred_tubes[k] = pack_tube(pred_frames);
        gt_tubes[k] = pack_tube(gt_frames);
    }

    std::vector<ApCandidate> candidates(n);
    for (int slot = 0; slot < n; ++slot) {
        double conf_sum = 0.0;
        for (const TrackFrame& frame : pred.frames) conf_sum += frame.conf[slot];
        candidates[slot].score = conf_sum / static_cast<double>(pred.frames.size());
        candidates[slot].iou_vs_gt.resize(n);
        for (int g = 0; g < n; ++g) {
            candidates[slot].iou_vs_gt[g] = tube_iou(pred_tubes[slot], gt_tubes[g]);
        }
    }
    return candidates;
}

ApResult ap_from_candidates(const std::vector<std::vector<ApCandidate>>& per_video) {
    struct Ref {
        double score;
        int video;
        int slot;
    };
    std::vector<Ref> order;
    long total = 0;
    for (std::size_t v = 0; v < per_video.size(); ++v) {
        for (std::size_t slot = 0; slot < per_video[v].size(); ++slot) {
            order.push_back(Ref{per_video[v][slot].score, static_cast<int>(v),
                                static_cast<int>(slot)});
            ++total;
        }
    }
    require(total > 0, "spatiotemporal_ap: no predicted tracks");

    // Greedy confidence-ordered matching, deterministic tie-break.
    std::sort(order.begin(), order.end(), [](const Ref& a, const Ref& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.video != b.video) return a.video < b.video;
        return a.slot < b.slot;
    });

    auto precision_at = [&](double threshold) {
        std::vector<std::vector<char>> gt_used(per_video.size());
        for (std::size_t v = 0; v < per_video.size(); ++v) {
            gt_used[v].assign(per_video[v].size(), 0);
        }
        long tp = 0;
        for (const Ref& ref : order) {
            const ApCandidate& track = per_video[ref.video][ref.slot];
            int best_g = -1;
            double best_iou = 0.0;
            for (int g = 0; g < static_cast<int>(track.iou_vs_gt.size()); ++g) {
                if (gt_used[ref.video][g]) continue;
                if (track.iou_vs_gt[g] > best_iou) {
                    best_iou = track.iou_vs_gt[g];
                    best_g = g;
                }
            }
            if (best_g >= 0 && best_iou >= threshold) {
                gt_used[ref.video][best_g] = 1;
                ++tp;
            }
        }
        return static_cast<double>(tp) / static_cast<double>(total);
    };

    ApResult result;
    double sum = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double threshold = 0.50 + 0.05 * k;
        const double precision = precision_at(threshold);
        sum += precision;
        if (k == 0) result.ap50 = 100.0 * precision;
        if (k == 5) result.ap75 = 100.0 * precision;
    }
    result.ap = 100.0 * sum / 10.0;
    return result;
}

ApResult spatiotemporal_ap(const std::vector<const TrackOutput*>& preds,
                           const std::vector<const GroundTruth*>& gts) {
    require(preds.size() == gts.size(), "spatiotemporal_ap: video count mismatch");
    require(!preds.empty(), "spatiotemporal_ap: no videos");
    std::vector<std::vector<ApCandidate>> per_video(preds.size());
    for (std::size_t v = 0; v < preds.size(); ++v) {
        per_video[v] = ap_candidates(*preds[v], *gts[v]);
    }
    return ap_from_candidates(per_video);
}

}  // namespace aga
