// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace csqp {

/// Row-major 8-bit grayscale image.
///
/// Pixel (i, j) addresses row i, column j, both zero-based. Height is the
/// number of rows (M), width the number of columns (N). Instances are treated
/// as immutable once filled; concurrent const access is safe.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }

    std::uint8_t at(int i, int j) const { return pixels_[index(i, j)]; }
    void set(int i, int j, std::uint8_t v) { pixels_[index(i, j)] = v; }

    const std::uint8_t* row(int i) const {
        assert(i >= 0 && i < height_);
        return pixels_.data() + static_cast<std::size_t>(i) * width_;
    }
    std::uint8_t* row(int i) {
        assert(i >= 0 && i < height_);
        return pixels_.data() + static_cast<std::size_t>(i) * width_;
    }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t index(int i, int j) const {
        assert(i >= 0 && i < height_ && j >= 0 && j < width_);
        return static_cast<std::size_t>(i) * width_ + j;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Grid of local codes produced by sliding a descriptor kernel over an image.
/// Every code lies in [0, bins-1]; bins is at most 256 so codes fit in a byte.
class FeatureImage {
public:
    FeatureImage() = default;
    FeatureImage(int width, int height, int bins);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int bins() const noexcept { return bins_; }

    std::uint8_t at(int i, int j) const { return codes_[index(i, j)]; }
    void set(int i, int j, std::uint8_t v) { codes_[index(i, j)] = v; }

    const std::uint8_t* row(int i) const {
        assert(i >= 0 && i < height_);
        return codes_.data() + static_cast<std::size_t>(i) * width_;
    }
    std::uint8_t* row(int i) {
        assert(i >= 0 && i < height_);
        return codes_.data() + static_cast<std::size_t>(i) * width_;
    }

    std::span<const std::uint8_t> codes() const noexcept { return codes_; }

    bool operator==(const FeatureImage&) const = default;

private:
    std::size_t index(int i, int j) const {
        assert(i >= 0 && i < height_ && j >= 0 && j < width_);
        return static_cast<std::size_t>(i) * width_ + j;
    }

    int width_ = 0;
    int height_ = 0;
    int bins_ = 0;
    std::vector<std::uint8_t> codes_;
};

/// Interleaved 8-bit raster as produced by the decoders; 1 or 3 channels.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;
};

/// Collapses a raster to a single channel. Color input uses BT.601 luma,
/// round(0.299 R + 0.587 G + 0.114 B) with exact half-up rounding; gray input
/// passes through unchanged.
GrayImage to_grayscale(const RasterImage& raster);

/// Copies the w x h region whose top-left corner sits at column x, row y.
/// Throws ConfigError when the rectangle leaves the image or is empty.
GrayImage crop(const GrayImage& img, int x, int y, int w, int h);

/// Flips the image left-to-right.
GrayImage mirror_horizontal(const GrayImage& img);

} // namespace csqp
