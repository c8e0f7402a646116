// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "aga/appearance_pool.hpp"
#include "aga/rng.hpp"

namespace aga {

namespace {

constexpr std::uint64_t kSimStream = 0x64657463ULL;

void check_sim(const SimulatorParams& sim) {
    require(sim.alpha_loc >= 0.0 && sim.alpha_loc <= 1.0,
            "simulate_detections: alpha_loc must lie in [0, 1]");
    require(sim.sigma_obj >= 0.0 && sim.sigma_app >= 0.0 && sim.sigma_conf >= 0.0,
            "simulate_detections: noise sigmas must be >= 0");
    require(sim.dropout_rate >= 0.0 && sim.dropout_rate <= 1.0,
            "simulate_detections: dropout_rate must lie in [0, 1]");
}

Eigen::VectorXd normalized_or_zero(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (norm == 0.0) return v;
    return v / norm;
}

Eigen::VectorXd noise_vector(Rng& rng, int dim, double sigma) {
    Eigen::VectorXd out(dim);
    for (int d = 0; d < dim; ++d) out[d] = sigma * rng.normal();
    return out;
}

// Latent appearance of the nearest visible instance painted over its visible
// pixels, background zero. Pooling a detection's own visible mask over this
// map recovers its latent appearance.
FeatureMap compose_feature_map(const Scenario& sc, const FrameTruth& frame, int dim) {
    const RleMask& probe = frame.instances.front().visible_mask;
    FeatureMap fmap;
    fmap.height = probe.height;
    fmap.width = probe.width;
    fmap.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(probe.height) * probe.width, dim);
    for (std::size_t k = 0; k < frame.instances.size(); ++k) {
        const std::vector<std::uint8_t> bits = rle_decode_bits(frame.instances[k].visible_mask);
        for (std::size_t px = 0; px < bits.size(); ++px) {
            if (bits[px]) {
                fmap.values.row(static_cast<Eigen::Index>(px)) =
                    sc.instances[k].latent_appearance.transpose();
            }
        }
    }
    return fmap;
}

}  // namespace

Eigen::VectorXd positional_encoding(double cx_norm, double cy_norm, double size_norm, int dim) {
    require(dim >= 1, "positional_encoding: dim must be >= 1");
    const double vals[3] = {cx_norm, cy_norm, size_norm};
    Eigen::VectorXd phi(dim);
    for (int k = 0; k < dim; ++k) {
        const int feature = (k / 2) % 3;
        const int level = k / 6;
        const double angle = vals[feature] * std::numbers::pi * std::ldexp(1.0, level);
        phi[k] = (k % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
    return normalized_or_zero(phi);
}

std::vector<FrameDetections> simulate_detections(const Scenario& sc, const GroundTruth& gt,
                                                 const SimulatorParams& sim) {
    check_sim(sim);
    require(static_cast<int>(gt.frames.size()) == sc.frames,
            "simulate_detections: ground truth frame count mismatch");

    const int n = static_cast<int>(sc.instances.size());
    const int dim = static_cast<int>(sc.instances.front().latent_appearance.size());
    const double size_norm_base = std::sqrt(static_cast<double>(sc.width) * sc.height);

    Rng rng(mix_seed(sc.seed ^ mix_seed(sim.seed ^ kSimStream)));

    std::vector<FrameDetections> out;
    out.reserve(sc.frames);

    for (const FrameTruth& frame : gt.frames) {
        require(static_cast<int>(frame.instances.size()) == n,
                "simulate_detections: inconsistent instance count");

        std::vector<int> det_order(n);
        std::iota(det_order.begin(), det_order.end(), 0);
        rng.shuffle(det_order);

        FeatureMap fmap;
        if (sim.appearance_source == AppearanceSource::Pooled) {
            fmap = compose_feature_map(sc, frame, dim);
        }

        FrameDetections det;
        det.frame_index = frame.frame_index;
        det.e_obj.vectors.resize(n, dim);
        det.e_app.vectors.resize(n, dim);
        det.conf.resize(n);
        det.class_ids.resize(n);
        det.masks.resize(n);
        det.gt_ids.resize(n);

        for (int slot = 0; slot < n; ++slot) {
            const int k = det_order[slot];
            const InstanceSpec& inst = sc.instances[k];
            const FrameInstanceTruth& truth = frame.instances[k];

            const Eigen::VectorXd obj_noise = noise_vector(rng, dim, sim.sigma_obj);
            const Eigen::VectorXd app_noise = noise_vector(rng, dim, sim.sigma_app);
            const double conf_noise = sim.sigma_conf * rng.normal();
            const bool dropped = rng.uniform() < sim.dropout_rate;

            const Eigen::VectorXd phi =
                positional_encoding(truth.center.x() / sc.width, truth.center.y() / sc.height,
                                    std::sqrt(inst.axes_px.x() * inst.axes_px.y()) / size_norm_base,
                                    dim);
            det.e_obj.vectors.row(slot) =
                normalized_or_zero(sim.alpha_loc * phi +
                                   (1.0 - sim.alpha_loc) * inst.latent_appearance + obj_noise)
                    .transpose();

            Eigen::VectorXd app_base;
            if (sim.appearance_source == AppearanceSource::Pooled) {
                InstanceMask pool_mask = rle_decode(truth.visible_mask);
                app_base = masked_average_pool(fmap, pool_mask);
            } else {
                app_base = inst.latent_appearance * truth.visibility;
            }

            if (dropped) {
                Eigen::VectorXd pure(dim);
                for (int d = 0; d < dim; ++d) pure[d] = rng.normal();
                det.e_app.vectors.row(slot) = normalized_or_zero(pure).transpose();
                det.conf[slot] = 0.0;
            } else {
                det.e_app.vectors.row(slot) = normalized_or_zero(app_base + app_noise).transpose();
                det.conf[slot] = std::clamp(truth.visibility + conf_noise, 0.0, 1.0);
            }

            det.class_ids[slot] = inst.class_id;
            det.masks[slot] = truth.visible_mask;
            det.gt_ids[slot] = inst.id;
        }

        out.push_back(std::move(det));
    }

    return out;
}

}  // namespace aga
