// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/image.hpp"

#include "csqp/errors.hpp"

#include <algorithm>
#include <string>

namespace csqp {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 0 || height < 0) {
        throw DimensionError("negative image dimensions");
    }
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 0 || height < 0) {
        throw DimensionError("negative image dimensions");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * height) {
        throw DimensionError("pixel buffer size does not match " +
                             std::to_string(width) + "x" + std::to_string(height));
    }
}

FeatureImage::FeatureImage(int width, int height, int bins)
    : width_(width), height_(height), bins_(bins) {
    if (width < 0 || height < 0) {
        throw DimensionError("negative feature image dimensions");
    }
    if (bins < 1 || bins > 256) {
        throw DimensionError("feature image bins must lie in [1,256]");
    }
    codes_.assign(static_cast<std::size_t>(width) * height, 0);
}

GrayImage to_grayscale(const RasterImage& raster) {
    if (raster.channels != 1 && raster.channels != 3) {
        throw FormatError("unsupported channel count " + std::to_string(raster.channels));
    }
    const std::size_t count = static_cast<std::size_t>(raster.width) * raster.height;
    if (raster.data.size() != count * raster.channels) {
        throw FormatError("raster buffer size does not match its dimensions");
    }
    if (raster.channels == 1) {
        return GrayImage(raster.width, raster.height, raster.data);
    }
    std::vector<std::uint8_t> gray(count);
    const std::uint8_t* src = raster.data.data();
    for (std::size_t p = 0; p < count; ++p, src += 3) {
        // Integer milli-luma keeps the half-up rounding exact.
        const unsigned luma = 299u * src[0] + 587u * src[1] + 114u * src[2];
        gray[p] = static_cast<std::uint8_t>((luma + 500u) / 1000u);
    }
    return GrayImage(raster.width, raster.height, std::move(gray));
}

GrayImage crop(const GrayImage& img, int x, int y, int w, int h) {
    if (w <= 0 || h <= 0) {
        throw ConfigError("crop rectangle must have positive size");
    }
    if (x < 0 || y < 0 || x + w > img.width() || y + h > img.height()) {
        throw ConfigError("crop rectangle " + std::to_string(x) + "," + std::to_string(y) +
                          "," + std::to_string(w) + "," + std::to_string(h) +
                          " leaves the " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + " image");
    }
    GrayImage out(w, h);
    for (int i = 0; i < h; ++i) {
        const std::uint8_t* src = img.row(y + i) + x;
        std::uint8_t* dst = out.row(i);
        std::copy(src, src + w, dst);
    }
    return out;
}

GrayImage mirror_horizontal(const GrayImage& img) {
    GrayImage out(img.width(), img.height());
    for (int i = 0; i < img.height(); ++i) {
        const std::uint8_t* src = img.row(i);
        std::uint8_t* dst = out.row(i);
        for (int j = 0; j < img.width(); ++j) {
            dst[j] = src[img.width() - 1 - j];
        }
    }
    return out;
}

} // namespace csqp
