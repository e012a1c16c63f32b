// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/baselines.hpp"

#include "csqp/errors.hpp"

#include <string>

namespace csqp {

namespace {

void require_min(const GrayImage& img, int min_side, const char* what) {
    if (img.width() < min_side || img.height() < min_side) {
        throw DimensionError(std::string(what) + " needs at least a " +
                             std::to_string(min_side) + "x" + std::to_string(min_side) +
                             " image, got " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()));
    }
}

} // namespace

FeatureImage lbp_feature_image(const GrayImage& img) {
    require_min(img, 3, "lbp");
    const int out_h = img.height() - 2;
    const int out_w = img.width() - 2;
    FeatureImage out(out_w, out_h, 256);
    for (int i = 0; i < out_h; ++i) {
        const std::uint8_t* top = img.row(i);
        const std::uint8_t* mid = img.row(i + 1);
        const std::uint8_t* bot = img.row(i + 2);
        std::uint8_t* dst = out.row(i);
        for (int j = 0; j < out_w; ++j) {
            const std::uint8_t c = mid[j + 1];
            unsigned code = 0;
            code |= static_cast<unsigned>(top[j] > c) << 7;     // top-left
            code |= static_cast<unsigned>(top[j + 1] > c) << 6; // top
            code |= static_cast<unsigned>(top[j + 2] > c) << 5; // top-right
            code |= static_cast<unsigned>(mid[j + 2] > c) << 4; // right
            code |= static_cast<unsigned>(bot[j + 2] > c) << 3; // bottom-right
            code |= static_cast<unsigned>(bot[j + 1] > c) << 2; // bottom
            code |= static_cast<unsigned>(bot[j] > c) << 1;     // bottom-left
            code |= static_cast<unsigned>(mid[j] > c);          // left
            dst[j] = static_cast<std::uint8_t>(code);
        }
    }
    return out;
}

FeatureVector describe_lbp(const GrayImage& img) {
    return histogram_of(lbp_feature_image(img), DescriptorId::Lbp);
}

FeatureImage cslbp_feature_image(const GrayImage& img) {
    require_min(img, 3, "cslbp");
    const int out_h = img.height() - 2;
    const int out_w = img.width() - 2;
    FeatureImage out(out_w, out_h, 16);
    for (int i = 0; i < out_h; ++i) {
        const std::uint8_t* top = img.row(i);
        const std::uint8_t* mid = img.row(i + 1);
        const std::uint8_t* bot = img.row(i + 2);
        std::uint8_t* dst = out.row(i);
        for (int j = 0; j < out_w; ++j) {
            unsigned code = 0;
            code |= static_cast<unsigned>(top[j] > bot[j + 2]) << 3;     // TL vs BR
            code |= static_cast<unsigned>(top[j + 1] > bot[j + 1]) << 2; // T vs B
            code |= static_cast<unsigned>(top[j + 2] > bot[j]) << 1;     // TR vs BL
            code |= static_cast<unsigned>(mid[j + 2] > mid[j]);          // R vs L
            dst[j] = static_cast<std::uint8_t>(code);
        }
    }
    return out;
}

FeatureVector describe_cslbp(const GrayImage& img) {
    return histogram_of(cslbp_feature_image(img), DescriptorId::Cslbp);
}

FeatureImage csltp_feature_image(const GrayImage& img, int threshold) {
    require_min(img, 3, "csltp");
    if (threshold < 0) {
        throw ConfigError("csltp threshold must be non-negative, got " +
                          std::to_string(threshold));
    }
    const int out_h = img.height() - 2;
    const int out_w = img.width() - 2;
    FeatureImage out(out_w, out_h, 9);
    auto tern = [threshold](int first, int opposite) -> int {
        const int diff = first - opposite;
        if (diff > threshold) return 1;
        if (diff < -threshold) return -1;
        return 0;
    };
    for (int i = 0; i < out_h; ++i) {
        const std::uint8_t* top = img.row(i);
        const std::uint8_t* bot = img.row(i + 2);
        std::uint8_t* dst = out.row(i);
        for (int j = 0; j < out_w; ++j) {
            const int d1 = tern(top[j], bot[j + 2]);     // TL vs BR
            const int d2 = tern(top[j + 2], bot[j]);     // TR vs BL
            dst[j] = static_cast<std::uint8_t>(3 * (d1 + 1) + (d2 + 1));
        }
    }
    return out;
}

FeatureVector describe_csltp(const GrayImage& img, int threshold) {
    return histogram_of(csltp_feature_image(img, threshold), DescriptorId::Csltp);
}

GrayImage slbp_mean_image(const GrayImage& img) {
    require_min(img, 2, "2x2 block mean");
    const int out_h = img.height() - 1;
    const int out_w = img.width() - 1;
    GrayImage out(out_w, out_h);
    for (int i = 0; i < out_h; ++i) {
        const std::uint8_t* r0 = img.row(i);
        const std::uint8_t* r1 = img.row(i + 1);
        std::uint8_t* dst = out.row(i);
        for (int j = 0; j < out_w; ++j) {
            const unsigned sum = r0[j] + r0[j + 1] + r1[j] + r1[j + 1];
            dst[j] = static_cast<std::uint8_t>((sum + 2) >> 2); // half-up
        }
    }
    return out;
}

FeatureImage slbp_feature_image(const GrayImage& img) {
    require_min(img, 4, "slbp");
    FeatureImage fi = lbp_feature_image(slbp_mean_image(img));
    return fi;
}

FeatureVector describe_slbp(const GrayImage& img) {
    return histogram_of(slbp_feature_image(img), DescriptorId::Slbp);
}

} // namespace csqp
