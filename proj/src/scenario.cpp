// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aga/rng.hpp"

namespace aga {

namespace {

constexpr std::uint64_t kBaseStream = 0x6f766572616c6cULL;
constexpr std::uint64_t kSwapStream = 0x73776170ULL;

void check_params(const ScenarioParams& p) {
    require(p.frames >= 2, "scenario: need at least 2 frames");
    require(p.min_instances >= 2 && p.max_instances <= 3 && p.min_instances <= p.max_instances,
            "scenario: instance count range must lie within {2, 3}");
    require(!p.resolutions.empty(), "scenario: no resolutions");
    require(p.margin >= 0.0, "scenario: negative margin");
    require(p.min_axis_frac > 0.0 && p.min_axis_frac <= p.max_axis_frac,
            "scenario: bad ellipse axis bounds");
    require(p.embed_dim >= 1, "scenario: embed_dim must be >= 1");
    require(p.mask_scale > 0.0 && p.mask_scale <= 1.0, "scenario: mask_scale in (0, 1]");
}

// Which trajectory drives this instance at this frame, given the swap.
int trajectory_source(const Scenario& sc, int instance, int frame_index) {
    if (sc.kind != ScenarioKind::Swap) return instance;
    const bool swapped = sc.swap_mode == SwapMode::Permanent
                             ? frame_index >= sc.swap_frame
                             : frame_index == sc.swap_frame;
    if (!swapped) return instance;
    if (instance == sc.swap_pair[0]) return sc.swap_pair[1];
    if (instance == sc.swap_pair[1]) return sc.swap_pair[0];
    return instance;
}

}  // namespace

Eigen::Vector2d eval_bezier(const BezierTrajectory& b, double t) {
    require(t >= 0.0 && t <= 1.0, "eval_bezier: t must lie in [0, 1]");
    std::array<Eigen::Vector2d, 4> q = b.control;
    for (int level = 3; level >= 1; --level) {
        for (int i = 0; i < level; ++i) {
            q[i] = (1.0 - t) * q[i] + t * q[i + 1];
        }
    }
    return q[0];
}

Eigen::Vector2d instance_center(const Scenario& sc, int instance, int frame_index) {
    require(instance >= 0 && instance < static_cast<int>(sc.instances.size()),
            "instance_center: instance out of range");
    require(frame_index >= 1 && frame_index <= sc.frames, "instance_center: bad frame index");

    const int source = trajectory_source(sc, instance, frame_index);
    const double t = sc.frames == 1 ? 0.0
                                    : static_cast<double>(frame_index - 1) /
                                          static_cast<double>(sc.frames - 1);
    const Eigen::Vector2d norm = eval_bezier(sc.instances[source].trajectory, t);
    return {norm.x() * sc.width, norm.y() * sc.height};
}

Scenario sample_scenario(std::uint64_t seed, ScenarioKind kind, const ScenarioParams& p) {
    check_params(p);
    if (kind == ScenarioKind::Swap) {
        require(p.frames >= 4, "scenario: swap kind needs at least 4 frames");
    }

    Rng rng(mix_seed(seed ^ kBaseStream));

    Scenario sc;
    sc.kind = kind;
    sc.frames = p.frames;
    sc.seed = seed;
    sc.mask_scale = p.mask_scale;
    sc.swap_mode = p.swap_mode;
    sc.width = p.resolutions[rng.below(p.resolutions.size())];
    sc.height = p.resolutions[rng.below(p.resolutions.size())];

    const int n = rng.uniform_int(p.min_instances, p.max_instances);
    const double min_side = std::min(sc.width, sc.height);

    std::vector<int> depth(n);
    std::iota(depth.begin(), depth.end(), 0);
    rng.shuffle(depth);

    // Instances get mutually orthogonal unit latents: each video is composed
    // of visually distinct objects, so appearances never collide by chance.
    require(p.embed_dim >= p.max_instances, "scenario: embed_dim must be >= instance count");
    std::vector<Eigen::VectorXd> latents;
    while (static_cast<int>(latents.size()) < n) {
        Eigen::VectorXd latent(p.embed_dim);
        for (int d = 0; d < p.embed_dim; ++d) latent[d] = rng.normal();
        for (const Eigen::VectorXd& prev : latents) latent -= latent.dot(prev) * prev;
        const double norm = latent.norm();
        if (norm < 1e-6) continue;  // essentially impossible; redraw
        latents.push_back(latent / norm);
    }

    for (int k = 0; k < n; ++k) {
        InstanceSpec inst;
        inst.id = k;
        inst.class_id = static_cast<int>(rng.below(p.num_classes));
        inst.depth_rank = depth[k];
        inst.axes_px = {rng.uniform(p.min_axis_frac, p.max_axis_frac) * min_side,
                        rng.uniform(p.min_axis_frac, p.max_axis_frac) * min_side};
        inst.latent_appearance = latents[k];

        // Endpoints start and finish inside the frame, with starts spread out
        // (composited objects are placed apart). The interior control points
        // scatter around the endpoints and may pull the curve out by up to
        // the margin (convex hull bound), so instances exit and re-enter
        // mid-video and trajectories intersect without degenerating into
        // tangles.
        auto clip = [&](double v) { return std::clamp(v, -p.margin, 1.0 + p.margin); };
        Eigen::Vector2d start;
        for (int attempt = 0; attempt < 64; ++attempt) {
            start = {rng.uniform(0.08, 0.92), rng.uniform(0.08, 0.92)};
            bool clear = true;
            for (const InstanceSpec& other : sc.instances) {
                if ((other.trajectory.control[0] - start).norm() < 0.25) clear = false;
            }
            if (clear) break;
        }
        const Eigen::Vector2d finish{rng.uniform(0.08, 0.92), rng.uniform(0.08, 0.92)};
        inst.trajectory.control[0] = start;
        inst.trajectory.control[1] = {clip(start.x() + rng.uniform(-0.35, 0.35)),
                                      clip(start.y() + rng.uniform(-0.35, 0.35))};
        inst.trajectory.control[2] = {clip(finish.x() + rng.uniform(-0.35, 0.35)),
                                      clip(finish.y() + rng.uniform(-0.35, 0.35))};
        inst.trajectory.control[3] = finish;
        sc.instances.push_back(std::move(inst));
    }

    if (kind == ScenarioKind::Swap) {
        Rng swap_rng(mix_seed(seed ^ kSwapStream));
        int a = static_cast<int>(swap_rng.below(n));
        int b = static_cast<int>(swap_rng.below(n - 1));
        if (b >= a) ++b;
        sc.swap_pair = {std::min(a, b), std::max(a, b)};

        // A position exchange is only a meaningful swap event when both
        // members are observable and apart: restrict the swap frame to
        // moments where the pair members are inside the frame, disjoint from
        // each other and clear of any nearer instance. Falls back to the
        // least-bad frame when no moment qualifies.
        auto center_at = [&](int instance, int f) {
            const double t =
                static_cast<double>(f - 1) / static_cast<double>(p.frames - 1);
            const Eigen::Vector2d c = eval_bezier(sc.instances[instance].trajectory, t);
            return Eigen::Vector2d(c.x() * sc.width, c.y() * sc.height);
        };
        auto max_axis = [&](int instance) {
            return std::max(sc.instances[instance].axes_px.x(),
                            sc.instances[instance].axes_px.y());
        };
        // Worst constraint slack for one pair member; positive means fully
        // inside the frame and disjoint from everything nearer or swapped.
        auto member_slack = [&](int instance, int f) {
            const Eigen::Vector2d c = center_at(instance, f);
            const double axis = max_axis(instance);
            double slack = std::min({c.x() - axis, sc.width - axis - c.x(), c.y() - axis,
                                     sc.height - axis - c.y()});
            for (int other = 0; other < n; ++other) {
                if (other == instance) continue;
                const bool relevant =
                    other == sc.swap_pair[0] || other == sc.swap_pair[1] ||
                    sc.instances[other].depth_rank < sc.instances[instance].depth_rank;
                if (!relevant) continue;
                const double gap = (center_at(other, f) - c).norm() - axis - max_axis(other);
                slack = std::min(slack, gap);
            }
            return slack;
        };
        auto frame_slack = [&](int f) {
            return std::min({member_slack(sc.swap_pair[0], f - 1),
                             member_slack(sc.swap_pair[0], f),
                             member_slack(sc.swap_pair[1], f - 1),
                             member_slack(sc.swap_pair[1], f)});
        };

        std::vector<int> candidates;
        int fallback = 2;
        double best_slack = -std::numeric_limits<double>::infinity();
        for (int f = 2; f <= p.frames - 2; ++f) {
            const double slack = frame_slack(f);
            if (slack >= 0.0) candidates.push_back(f);
            if (slack > best_slack) {
                best_slack = slack;
                fallback = f;
            }
        }
        sc.swap_frame = candidates.empty()
                            ? fallback
                            : candidates[swap_rng.below(candidates.size())];
    }

    return sc;
}

GroundTruth build_ground_truth(const Scenario& sc) {
    require(!sc.instances.empty(), "build_ground_truth: no instances");
    if (sc.kind == ScenarioKind::Swap) {
        require(sc.swap_frame > 1 && sc.swap_frame < sc.frames - 1,
                "build_ground_truth: swap_frame must lie strictly inside (1, frames-1)");
        require(sc.swap_pair[0] >= 0 && sc.swap_pair[1] >= 0 &&
                    sc.swap_pair[0] != sc.swap_pair[1],
                "build_ground_truth: bad swap pair");
    }

    const int n = static_cast<int>(sc.instances.size());
    const int gw = std::max(1, static_cast<int>(std::lround(sc.width * sc.mask_scale)));
    const int gh = std::max(1, static_cast<int>(std::lround(sc.height * sc.mask_scale)));
    const double inv_scale_x = static_cast<double>(sc.width) / gw;
    const double inv_scale_y = static_cast<double>(sc.height) / gh;

    // Depth order, nearest first.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return sc.instances[a].depth_rank < sc.instances[b].depth_rank;
    });

    GroundTruth gt;
    gt.frames.resize(sc.frames);

    std::vector<std::vector<std::uint8_t>> full(n);
    std::vector<std::int64_t> unclipped(n);
    std::vector<std::uint8_t> occupied(static_cast<std::size_t>(gw) * gh);

    for (int f = 1; f <= sc.frames; ++f) {
        FrameTruth& frame = gt.frames[f - 1];
        frame.frame_index = f;
        frame.instances.resize(n);

        for (int k = 0; k < n; ++k) {
            const Eigen::Vector2d c = instance_center(sc, k, f);
            const double ax = sc.instances[k].axes_px.x();
            const double ay = sc.instances[k].axes_px.y();

            auto& mask = full[k];
            mask.assign(static_cast<std::size_t>(gw) * gh, 0);
            std::int64_t total = 0;

            // Raster over the ellipse's bounding box on the (unbounded) mask
            // grid; pixels outside the frame count toward the denominator
            // but are clipped from the stored mask.
            const int r0 = static_cast<int>(std::floor((c.y() - ay) / inv_scale_y)) - 1;
            const int r1 = static_cast<int>(std::ceil((c.y() + ay) / inv_scale_y)) + 1;
            const int c0 = static_cast<int>(std::floor((c.x() - ax) / inv_scale_x)) - 1;
            const int c1 = static_cast<int>(std::ceil((c.x() + ax) / inv_scale_x)) + 1;
            for (int r = r0; r <= r1; ++r) {
                const double py = (r + 0.5) * inv_scale_y;
                const double dy = (py - c.y()) / ay;
                for (int col = c0; col <= c1; ++col) {
                    const double px = (col + 0.5) * inv_scale_x;
                    const double dx = (px - c.x()) / ax;
                    if (dx * dx + dy * dy > 1.0) continue;
                    ++total;
                    if (r >= 0 && r < gh && col >= 0 && col < gw) {
                        mask[static_cast<std::size_t>(r) * gw + col] = 1;
                    }
                }
            }

            unclipped[k] = total;
            frame.instances[k].center = c;
        }

        // Resolve occlusion nearest-first: a pixel belongs to the nearest
        // instance covering it.
        std::fill(occupied.begin(), occupied.end(), 0);
        for (int k : order) {
            std::vector<std::uint8_t> visible(static_cast<std::size_t>(gw) * gh, 0);
            std::int64_t visible_count = 0;
            for (std::size_t px = 0; px < visible.size(); ++px) {
                if (full[k][px] && !occupied[px]) {
                    visible[px] = 1;
                    ++visible_count;
                    occupied[px] = 1;
                }
            }
            FrameInstanceTruth& truth = frame.instances[k];
            truth.full_mask = rle_encode_bits(gw, gh, full[k]);
            truth.visible_mask = rle_encode_bits(gw, gh, visible);
            truth.visibility =
                unclipped[k] > 0
                    ? static_cast<double>(visible_count) / static_cast<double>(unclipped[k])
                    : 0.0;
        }
    }

    return gt;
}

std::pair<Scenario, GroundTruth> generate_scenario(std::uint64_t seed, ScenarioKind kind,
                                                   const ScenarioParams& p) {
    Scenario sc = sample_scenario(seed, kind, p);
    GroundTruth gt = build_ground_truth(sc);
    return {std::move(sc), std::move(gt)};
}

}  // namespace aga
