// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>

#include "csqp/feature.hpp"
#include "csqp/image.hpp"

namespace csqp {

/// Binary encoding of an ordered intensity pair: 0 when e <= f, 1 otherwise.
/// Equality deliberately falls into the 0 branch.
inline std::uint8_t encode_c(std::uint8_t e, std::uint8_t f) noexcept {
    return e > f ? 1 : 0;
}

/// CSQP code for the 4x4 window anchored at (i, j).
///
/// The window splits into four 2x2 sub-blocks. The high nibble compares the
/// top-left block against the bottom-right one, pixel by pixel; the low
/// nibble compares the top-right block against the bottom-left one. Bit
/// weights run 2^7..2^4 and 2^3..2^0 in row-major order of the leading block.
/// Throws DimensionError when the window does not fit inside the image.
std::uint8_t encode_csqp_at(const GrayImage& img, int i, int j);

/// Dense CSQP encoding: every 4x4 window position with stride 1, producing a
/// (height-3) x (width-3) grid of 8-bit codes. Requires at least 4x4 input.
FeatureImage csqp_feature_image(const GrayImage& img);

/// The CSQP descriptor of an image: the 256-bin histogram of its feature
/// image. The counts sum to (height-3) * (width-3).
FeatureVector describe_csqp(const GrayImage& img);

} // namespace csqp
