// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/rle.hpp"

namespace aga {

RleMask rle_encode_bits(int width, int height, const std::vector<std::uint8_t>& bits) {
    require(width >= 0 && height >= 0, "rle_encode: negative shape");
    require(bits.size() == static_cast<std::size_t>(width) * height,
            "rle_encode: buffer size does not match shape");

    RleMask r;
    r.width = width;
    r.height = height;

    std::uint8_t current = 0;  // runs start with zeros
    std::int64_t run = 0;
    for (std::uint8_t b : bits) {
        const std::uint8_t v = b ? 1 : 0;
        if (v == current) {
            ++run;
        } else {
            r.counts.push_back(run);
            current = v;
            run = 1;
        }
    }
    r.counts.push_back(run);
    return r;
}

RleMask rle_encode(const InstanceMask& m, double threshold) {
    const int h = m.height();
    const int w = m.width();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            bits[static_cast<std::size_t>(r) * w + c] = m.weights(r, c) >= threshold ? 1 : 0;
        }
    }
    return rle_encode_bits(w, h, bits);
}

std::vector<std::uint8_t> rle_decode_bits(const RleMask& r) {
    require(r.width >= 0 && r.height >= 0, "rle_decode: negative shape");
    std::int64_t total = 0;
    for (std::size_t i = 0; i < r.counts.size(); ++i) {
        require(r.counts[i] >= 0, "rle_decode: negative run length");
        require(i == 0 || r.counts[i] > 0, "rle_decode: zero-length run after the first");
        total += r.counts[i];
    }
    require(total == r.area(), "rle_decode: run lengths do not sum to width*height");

    std::vector<std::uint8_t> bits(static_cast<std::size_t>(r.area()), 0);
    std::size_t pos = 0;
    std::uint8_t value = 0;
    for (std::int64_t count : r.counts) {
        for (std::int64_t k = 0; k < count; ++k) bits[pos++] = value;
        value ^= 1;
    }
    return bits;
}

InstanceMask rle_decode(const RleMask& r) {
    const std::vector<std::uint8_t> bits = rle_decode_bits(r);
    InstanceMask m;
    m.weights.resize(r.height, r.width);
    for (int row = 0; row < r.height; ++row) {
        for (int col = 0; col < r.width; ++col) {
            m.weights(row, col) = bits[static_cast<std::size_t>(row) * r.width + col];
        }
    }
    return m;
}

}  // namespace aga
