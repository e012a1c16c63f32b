// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include "csqp/baselines.hpp"
#include "csqp/csqp.hpp"
#include "csqp/feature.hpp"

namespace csqp {

/// Tunable knobs shared by the descriptor dispatch. Only CSLTP takes a
/// parameter today; the default threshold of 5 is documented in the README.
struct DescriptorParams {
    int csltp_threshold = 5;
};

/// Smallest square image the descriptor accepts.
int min_image_side(DescriptorId id);

/// Computes the feature image of `img` for the given descriptor.
FeatureImage feature_image(const GrayImage& img, DescriptorId id,
                           const DescriptorParams& params = {});

/// Computes the histogram descriptor of `img` for the given descriptor.
FeatureVector describe(const GrayImage& img, DescriptorId id,
                       const DescriptorParams& params = {});

} // namespace csqp
