// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/descriptors.hpp"

#include "csqp/errors.hpp"

namespace csqp {

int min_image_side(DescriptorId id) {
    switch (id) {
    case DescriptorId::Csqp:
    case DescriptorId::Slbp:
        return 4;
    case DescriptorId::Lbp:
    case DescriptorId::Cslbp:
    case DescriptorId::Csltp:
        return 3;
    }
    throw ConfigError("unknown descriptor id");
}

FeatureImage feature_image(const GrayImage& img, DescriptorId id,
                           const DescriptorParams& params) {
    switch (id) {
    case DescriptorId::Csqp:
        return csqp_feature_image(img);
    case DescriptorId::Lbp:
        return lbp_feature_image(img);
    case DescriptorId::Cslbp:
        return cslbp_feature_image(img);
    case DescriptorId::Csltp:
        return csltp_feature_image(img, params.csltp_threshold);
    case DescriptorId::Slbp:
        return slbp_feature_image(img);
    }
    throw ConfigError("unknown descriptor id");
}

FeatureVector describe(const GrayImage& img, DescriptorId id,
                       const DescriptorParams& params) {
    return histogram_of(feature_image(img, id, params), id);
}

} // namespace csqp
