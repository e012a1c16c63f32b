// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/csqp.hpp"

#include "csqp/errors.hpp"

#include <string>

namespace csqp {

namespace {

void require_min_4x4(const GrayImage& img) {
    if (img.width() < 4 || img.height() < 4) {
        throw DimensionError("csqp needs at least a 4x4 image, got " +
                             std::to_string(img.width()) + "x" +
                             std::to_string(img.height()));
    }
}

inline std::uint8_t code_from_rows(const std::uint8_t* r0, const std::uint8_t* r1,
                                   const std::uint8_t* r2, const std::uint8_t* r3,
                                   int j) noexcept {
    // High nibble: top-left 2x2 vs bottom-right 2x2. Low nibble: top-right
    // 2x2 vs bottom-left 2x2. Each comparison contributes one bit.
    unsigned code = 0;
    code |= static_cast<unsigned>(r0[j] > r2[j + 2]) << 7;
    code |= static_cast<unsigned>(r0[j + 1] > r2[j + 3]) << 6;
    code |= static_cast<unsigned>(r1[j] > r3[j + 2]) << 5;
    code |= static_cast<unsigned>(r1[j + 1] > r3[j + 3]) << 4;
    code |= static_cast<unsigned>(r0[j + 2] > r2[j]) << 3;
    code |= static_cast<unsigned>(r0[j + 3] > r2[j + 1]) << 2;
    code |= static_cast<unsigned>(r1[j + 2] > r3[j]) << 1;
    code |= static_cast<unsigned>(r1[j + 3] > r3[j + 1]);
    return static_cast<std::uint8_t>(code);
}

} // namespace

std::uint8_t encode_csqp_at(const GrayImage& img, int i, int j) {
    if (i < 0 || j < 0 || i + 4 > img.height() || j + 4 > img.width()) {
        throw DimensionError("4x4 window at (" + std::to_string(i) + "," +
                             std::to_string(j) + ") leaves the " +
                             std::to_string(img.width()) + "x" +
                             std::to_string(img.height()) + " image");
    }
    return code_from_rows(img.row(i), img.row(i + 1), img.row(i + 2), img.row(i + 3), j);
}

FeatureImage csqp_feature_image(const GrayImage& img) {
    require_min_4x4(img);
    const int out_h = img.height() - 3;
    const int out_w = img.width() - 3;
    FeatureImage out(out_w, out_h, 256);
    for (int i = 0; i < out_h; ++i) {
        const std::uint8_t* r0 = img.row(i);
        const std::uint8_t* r1 = img.row(i + 1);
        const std::uint8_t* r2 = img.row(i + 2);
        const std::uint8_t* r3 = img.row(i + 3);
        std::uint8_t* dst = out.row(i);
        for (int j = 0; j < out_w; ++j) {
            dst[j] = code_from_rows(r0, r1, r2, r3, j);
        }
    }
    return out;
}

FeatureVector describe_csqp(const GrayImage& img) {
    return histogram_of(csqp_feature_image(img), DescriptorId::Csqp);
}

} // namespace csqp
