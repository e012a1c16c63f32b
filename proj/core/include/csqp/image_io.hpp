// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>

#include "csqp/image.hpp"

namespace csqp {

/// Decodes PNG, JPEG, BMP, or PGM/PPM (P2/P3/P5/P6) to an 8-bit raster.
/// The container is detected from the file's magic bytes, not its extension.
/// Errors carry the offending path.
RasterImage decode_raster(const std::filesystem::path& path);

/// decode_raster followed by to_grayscale.
GrayImage load_image(const std::filesystem::path& path);

/// Writes a binary PGM (P5, maxval 255). The header layout is fixed, so the
/// same image always produces the same bytes.
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG.
void write_png(const GrayImage& img, const std::filesystem::path& path);

} // namespace csqp
