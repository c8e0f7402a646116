// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "aga/appearance_pool.hpp"

namespace aga {

/// Row-major run-length encoding of a binary mask. `counts` alternates run
/// lengths of 0s and 1s, starting with the (possibly zero) leading run of 0s;
/// counts after the first are strictly positive and sum to width * height.
struct RleMask {
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> counts;

    std::int64_t area() const { return static_cast<std::int64_t>(width) * height; }

    /// Number of 1-pixels.
    std::int64_t foreground() const {
        std::int64_t fg = 0;
        for (std::size_t i = 1; i < counts.size(); i += 2) fg += counts[i];
        return fg;
    }

    bool operator==(const RleMask&) const = default;
};

/// Encode a (possibly soft) mask, thresholding weights at `threshold`.
RleMask rle_encode(const InstanceMask& m, double threshold = 0.5);

/// Encode a row-major binary buffer of the given shape.
RleMask rle_encode_bits(int width, int height, const std::vector<std::uint8_t>& bits);

/// Exact inverse of rle_encode on binary masks. Malformed input (counts not
/// summing to the area, negative runs) raises std::invalid_argument.
InstanceMask rle_decode(const RleMask& r);

/// Decode to a row-major 0/1 buffer without going through Eigen.
std::vector<std::uint8_t> rle_decode_bits(const RleMask& r);

}  // namespace aga
