#pragma once

// Raster types and portable image file I/O shared by every pipeline phase.
//
// Conventions: row-major storage, top-left origin, y increasing downward.
// Grayscale is 8-bit; deeper inputs are narrowed on load by right-shift.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "braille/errors.hpp"

namespace braille {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height intensities in [0, 255]

    static GrayImage filled(int w, int h, std::uint8_t value) {
        GrayImage img;
        img.width = w;
        img.height = h;
        img.pixels.assign(std::size_t(w) * std::size_t(h), value);
        return img;
    }

    std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return pixels.size(); }

    bool operator==(const GrayImage&) const = default;
};

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 1 = foreground (dot ink), 0 = background

    static BinaryImage filled(int w, int h, bool value) {
        BinaryImage img;
        img.width = w;
        img.height = h;
        img.pixels.assign(std::size_t(w) * std::size_t(h), value ? 1 : 0);
        return img;
    }

    bool test(int x, int y) const { return pixels[std::size_t(y) * width + x] != 0; }
    void set(int x, int y, bool value) { pixels[std::size_t(y) * width + x] = value ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (std::uint8_t p : pixels) n += p;
        return n;
    }

    bool operator==(const BinaryImage&) const = default;
};

/// Integer luma rule used for color inputs: floor((r + 2g + b) / 4).
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return std::uint8_t((unsigned(r) + 2u * unsigned(g) + unsigned(b)) / 4u);
}

namespace detail {

inline int pnm_read_token(std::istream& in) {
    // Skips whitespace and '#' comments, then reads one unsigned decimal token.
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw IoError("pgm: malformed header");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) throw IoError("pgm: header value out of range");
        c = in.get();
    }
    if (c != EOF) in.unget();
    return int(value);
}

inline GrayImage load_pgm(std::istream& in, const std::string& name) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') throw IoError("pgm: not a P5 file: " + name);
    const int width = pnm_read_token(in);
    const int height = pnm_read_token(in);
    const int maxval = pnm_read_token(in);
    if (width < 1 || height < 1) throw IoError("pgm: zero-dimension image: " + name);
    if (maxval < 1 || maxval > 65535) throw IoError("pgm: bad maxval: " + name);
    in.get();  // single whitespace byte after the header

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(std::size_t(width) * height);
    if (maxval < 256) {
        in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
        if (!in) throw IoError("pgm: truncated pixel data: " + name);
    } else {
        // 16-bit samples are big-endian; narrow to 8 bits by right-shift.
        std::vector<std::uint8_t> raw(img.pixels.size() * 2);
        in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
        if (!in) throw IoError("pgm: truncated pixel data: " + name);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = raw[2 * i];
    }
    return img;
}

inline GrayImage load_png(std::FILE* fp, const std::string& name) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: allocation failure");
    }

    std::vector<std::uint8_t> data;
    std::vector<png_bytep> rows;
    int width = 0, height = 0, channels = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: failed to decode: " + name);
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: palette images are unsupported: " + name);
    }
    if (bit_depth == 16) png_set_strip_16(png);  // keep the high byte
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    width = int(png_get_image_width(png, info));
    height = int(png_get_image_height(png, info));
    channels = int(png_get_channels(png, info));
    if (width < 1 || height < 1) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: zero-dimension image: " + name);
    }
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: only 8-bit gray or RGB is supported: " + name);
    }

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    data.resize(rowbytes * std::size_t(height));
    rows.resize(std::size_t(height));
    for (int y = 0; y < height; ++y) rows[std::size_t(y)] = data.data() + rowbytes * std::size_t(y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(std::size_t(width) * height);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* src = data.data() + rowbytes * std::size_t(y);
        std::uint8_t* dst = img.pixels.data() + std::size_t(y) * width;
        if (channels == 1) {
            std::memcpy(dst, src, std::size_t(width));
        } else {
            for (int x = 0; x < width; ++x) dst[x] = luma(src[3 * x], src[3 * x + 1], src[3 * x + 2]);
        }
    }
    return img;
}

}  // namespace detail

/// Loads a grayscale image from a P5 PGM or PNG file (format sniffed from magic bytes).
/// Color inputs are converted per pixel by the integer luma rule.
inline GrayImage load_gray(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open file: " + path.string());
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char*>(magic), 8);
    const std::streamsize got = probe.gcount();
    probe.close();

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) {
        std::FILE* fp = std::fopen(path.string().c_str(), "rb");
        if (!fp) throw IoError("cannot open file: " + path.string());
        try {
            GrayImage img = detail::load_png(fp, path.string());
            std::fclose(fp);
            return img;
        } catch (...) {
            std::fclose(fp);
            throw;
        }
    }
    if (got >= 2 && magic[0] == 'P' && magic[1] == '5') {
        std::ifstream in(path, std::ios::binary);
        return detail::load_pgm(in, path.string());
    }
    throw IoError("unsupported image format: " + path.string());
}

/// Writes a binary P5 PGM (maxval 255). Round-trips bit-exactly through load_gray.
inline void save_gray(const GrayImage& img, const std::filesystem::path& path) {
    if (img.width < 1 || img.height < 1 || img.pixels.size() != std::size_t(img.width) * img.height)
        throw IoError("save_gray: malformed image");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
    if (!out) throw IoError("write failure: " + path.string());
}

/// Visualization: foreground -> 0 (ink), background -> 255 (paper).
inline GrayImage binary_to_gray(const BinaryImage& img) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) out.pixels[i] = img.pixels[i] ? 0 : 255;
    return out;
}

}  // namespace braille
