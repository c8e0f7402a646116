// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "aga/detections.hpp"
#include "aga/scenario.hpp"

namespace aga {

/// Where appearance embeddings come from: directly from the latent vector,
/// or by mask-guided pooling of a synthetic per-frame feature map composed
/// from the instances' latents.
enum class AppearanceSource { Latent, Pooled };

/// Controls how location- vs appearance-dominant the simulated detector is.
struct SimulatorParams {
    double alpha_loc = 0.8;    // object embedding: weight of the positional code
    double sigma_obj = 0.05;   // noise on object embeddings
    double sigma_app = 0.1;    // noise on appearance embeddings
    double sigma_conf = 0.02;  // noise on confidences
    double dropout_rate = 0.0;  // per (frame, instance): conf -> 0, appearance -> noise
    AppearanceSource appearance_source = AppearanceSource::Latent;
    std::uint64_t seed = 0;  // mixed with the scenario seed
};

/// Fixed sinusoidal encoding of normalized center coordinates and instance
/// size; unit norm. Deterministic, no randomness.
Eigen::VectorXd positional_encoding(double cx_norm, double cy_norm, double size_norm, int dim);

/// Turn ground truth into per-frame detector output:
///   e_obj = normalize(alpha_loc * phi + (1 - alpha_loc) * latent + noise)
///   e_app = normalize(latent * visibility + noise)      (Latent source)
///   conf  = clamp(visibility + noise, 0, 1)
/// Detections are shuffled per frame; hidden ground-truth ids ride along for
/// evaluation only.
std::vector<FrameDetections> simulate_detections(const Scenario& sc, const GroundTruth& gt,
                                                 const SimulatorParams& sim = {});

}  // namespace aga
