// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/image_io.hpp"

#include "csqp/errors.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <jpeglib.h>

namespace csqp {

namespace {

[[noreturn]] void fail_io(const std::filesystem::path& path, const std::string& what) {
    throw IoError(what + ": " + path.string());
}

[[noreturn]] void fail_format(const std::filesystem::path& path, const std::string& what) {
    throw FormatError(what + ": " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail_io(path, "cannot open file");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) {
        fail_io(path, "read failure");
    }
    return bytes;
}

// ---------------------------------------------------------------- PNM -----

// P2/P5 grayscale and P3/P6 color, maxval up to 255. Values are taken
// verbatim; a maxval above 255 is rejected as an unsupported bit depth.
class PnmParser {
public:
    PnmParser(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path)
        : bytes_(bytes), path_(path) {}

    RasterImage parse() {
        if (bytes_.size() < 2 || bytes_[0] != 'P') {
            fail_format(path_, "not a PNM stream");
        }
        const char kind = static_cast<char>(bytes_[1]);
        pos_ = 2;
        const int width = next_int();
        const int height = next_int();
        const int maxval = next_int();
        if (width <= 0 || height <= 0) {
            fail_format(path_, "non-positive PNM dimensions");
        }
        if (maxval <= 0 || maxval > 255) {
            fail_format(path_, "unsupported PNM bit depth (maxval " +
                                   std::to_string(maxval) + ")");
        }
        const int channels = (kind == '3' || kind == '6') ? 3 : 1;
        RasterImage out;
        out.width = width;
        out.height = height;
        out.channels = channels;
        const std::size_t count =
            static_cast<std::size_t>(width) * height * channels;
        out.data.resize(count);
        if (kind == '2' || kind == '3') {
            for (std::size_t k = 0; k < count; ++k) {
                const int v = next_int();
                if (v < 0 || v > maxval) {
                    fail_format(path_, "PNM sample out of range");
                }
                out.data[k] = static_cast<std::uint8_t>(v);
            }
        } else if (kind == '5' || kind == '6') {
            // Exactly one whitespace byte separates the header from the raster.
            if (pos_ > bytes_.size() || pos_ + count > bytes_.size()) {
                fail_format(path_, "truncated PNM raster");
            }
            std::memcpy(out.data.data(), bytes_.data() + pos_, count);
        } else {
            fail_format(path_, std::string("unsupported PNM variant P") + kind);
        }
        return out;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = static_cast<char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    int next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            fail_format(path_, "malformed PNM header");
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1 << 30) {
                fail_format(path_, "PNM header value overflow");
            }
            ++pos_;
        }
        // Consume the single separator after the value for binary rasters.
        if (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) {
            ++pos_;
        }
        return static_cast<int>(v);
    }

    const std::vector<std::uint8_t>& bytes_;
    const std::filesystem::path& path_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- BMP -----

std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

// Uncompressed BI_RGB bitmaps with 8 (palette), 24, or 32 bits per pixel.
RasterImage decode_bmp(const std::vector<std::uint8_t>& b,
                       const std::filesystem::path& path) {
    if (b.size() < 54) {
        fail_format(path, "truncated BMP header");
    }
    const std::uint32_t pixel_offset = le32(&b[10]);
    const std::uint32_t header_size = le32(&b[14]);
    if (header_size < 40) {
        fail_format(path, "unsupported BMP header version");
    }
    const std::int32_t width = static_cast<std::int32_t>(le32(&b[18]));
    const std::int32_t height_raw = static_cast<std::int32_t>(le32(&b[22]));
    const std::uint16_t bpp = le16(&b[28]);
    const std::uint32_t compression = le32(&b[30]);
    if (compression != 0) {
        fail_format(path, "compressed BMP is not supported");
    }
    if (bpp != 8 && bpp != 24 && bpp != 32) {
        fail_format(path, "unsupported BMP bit depth " + std::to_string(bpp));
    }
    const bool bottom_up = height_raw > 0;
    const std::int32_t height = bottom_up ? height_raw : -height_raw;
    if (width <= 0 || height <= 0) {
        fail_format(path, "non-positive BMP dimensions");
    }

    const std::uint8_t* palette = nullptr;
    std::uint32_t palette_entries = 0;
    if (bpp == 8) {
        palette_entries = le32(&b[46]);
        if (palette_entries == 0) {
            palette_entries = 256;
        }
        const std::size_t palette_off = 14 + header_size;
        if (palette_off + palette_entries * 4ull > b.size()) {
            fail_format(path, "truncated BMP palette");
        }
        palette = b.data() + palette_off;
    }

    const std::size_t bytes_per_px = bpp / 8;
    const std::size_t row_size = ((static_cast<std::size_t>(width) * bytes_per_px + 3) / 4) * 4;
    if (pixel_offset + row_size * height > b.size()) {
        fail_format(path, "truncated BMP raster");
    }

    RasterImage out;
    out.width = width;
    out.height = height;
    out.channels = 3;
    out.data.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::int32_t i = 0; i < height; ++i) {
        const std::int32_t src_row = bottom_up ? height - 1 - i : i;
        const std::uint8_t* src = b.data() + pixel_offset + row_size * src_row;
        std::uint8_t* dst = out.data.data() + static_cast<std::size_t>(i) * width * 3;
        for (std::int32_t j = 0; j < width; ++j) {
            if (bpp == 8) {
                const std::uint8_t idx = src[j];
                if (idx >= palette_entries) {
                    fail_format(path, "BMP palette index out of range");
                }
                const std::uint8_t* e = palette + idx * 4; // BGRA entries
                dst[j * 3 + 0] = e[2];
                dst[j * 3 + 1] = e[1];
                dst[j * 3 + 2] = e[0];
            } else {
                const std::uint8_t* px = src + j * bytes_per_px; // BGR(A)
                dst[j * 3 + 0] = px[2];
                dst[j * 3 + 1] = px[1];
                dst[j * 3 + 2] = px[0];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- PNG -----

RasterImage decode_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        fail_format(path, std::string("PNG decode failed (") + image.message + ")");
    }
    image.format = PNG_FORMAT_RGB; // palette/gray/alpha/16-bit all normalized here
    RasterImage out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.channels = 3;
    out.data.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
        png_image_free(&image);
        fail_format(path, std::string("PNG decode failed (") + image.message + ")");
    }
    return out;
}

// --------------------------------------------------------------- JPEG -----

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf setjmp_buffer;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->setjmp_buffer, 1);
}

RasterImage decode_jpeg(const std::vector<std::uint8_t>& bytes,
                        const std::filesystem::path& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    RasterImage out;
    if (setjmp(jerr.setjmp_buffer)) {
        jpeg_destroy_decompress(&cinfo);
        fail_format(path, std::string("JPEG decode failed (") + jerr.message + ")");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.channels = 3;
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    const std::size_t stride = static_cast<std::size_t>(out.width) * 3;
    while (cinfo.output_scanline < cinfo.output_height) {
        std::uint8_t* row = out.data.data() + cinfo.output_scanline * stride;
        JSAMPROW rows[1] = {row};
        jpeg_read_scanlines(&cinfo, rows, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

} // namespace

RasterImage decode_raster(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        fail_io(path, "no such file");
    }
    const std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), "\x89PNG\r\n\x1a\n", 8) == 0) {
        return decode_png(path);
    }
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
        return decode_jpeg(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') {
        return decode_bmp(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '6') {
        return PnmParser(bytes, path).parse();
    }
    fail_format(path, "unrecognized image format");
}

GrayImage load_image(const std::filesystem::path& path) {
    return to_grayscale(decode_raster(path));
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail_io(path, "cannot open file for writing");
    }
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixels().size()));
    if (!out.good()) {
        fail_io(path, "write failure");
    }
}

void write_png(const GrayImage& img, const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0,
                                 img.pixels().data(), 0, nullptr)) {
        fail_io(path, std::string("PNG write failed (") + image.message + ")");
    }
}

} // namespace csqp
