// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include "csqp/feature.hpp"
#include "csqp/image.hpp"

namespace csqp {

/// Classic 3x3 LBP. Each interior pixel yields an 8-bit code: the eight ring
/// neighbors are compared against the center (1 when neighbor > center) with
/// bit weights 2^7..2^0 assigned clockwise from the top-left neighbor.
/// Output grid is (height-2) x (width-2); needs at least 3x3 input.
FeatureImage lbp_feature_image(const GrayImage& img);
FeatureVector describe_lbp(const GrayImage& img);

/// Center-symmetric LBP over the 3x3 ring: the four opposite pixel pairs
/// (top-left/bottom-right, top/bottom, top-right/bottom-left, right/left)
/// give a 4-bit code with weights 2^3..2^0. 16-bin histogram.
FeatureImage cslbp_feature_image(const GrayImage& img);
FeatureVector describe_cslbp(const GrayImage& img);

/// Center-symmetric LTP: the two diagonal pairs of the 3x3 ring are each
/// ternary coded against threshold t (+1 when first - opposite > t, -1 when
/// opposite - first > t, 0 otherwise); the code is 3*(d1+1) + (d2+1), nine
/// bins total. d1 is the top-left/bottom-right pair, d2 top-right/bottom-left.
FeatureImage csltp_feature_image(const GrayImage& img, int threshold);
FeatureVector describe_csltp(const GrayImage& img, int threshold);

/// The (height-1) x (width-1) image of 2x2 block means, rounded half-up.
GrayImage slbp_mean_image(const GrayImage& img);

/// Semi-local LBP: LBP computed over the 2x2 block-mean image, so one code
/// covers a 4x4 pixel footprint. Output grid is (height-3) x (width-3);
/// needs at least 4x4 input. 256-bin histogram.
FeatureImage slbp_feature_image(const GrayImage& img);
FeatureVector describe_slbp(const GrayImage& img);

} // namespace csqp
