#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <png.h>

#include "braille/image.hpp"

using namespace braille;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "braille_image_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

void write_bytes(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

void write_png(const fs::path& path, int w, int h, int channels,
               const std::vector<std::uint8_t>& data) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, png_uint_32(w), png_uint_32(h), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    auto rows = std::vector<png_bytep>(std::size_t(h));
    for (int y = 0; y < h; ++y)
        rows[std::size_t(y)] = const_cast<png_bytep>(data.data() + std::size_t(y) * w * channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace

TEST_CASE("load_gray reads a 1x1 P5 file") {
    const auto path = temp_file("one.pgm");
    write_bytes(path, std::string("P5\n1 1\n255\n") + char(77));
    const GrayImage img = load_gray(path);
    CHECK(img.width == 1);
    CHECK(img.height == 1);
    CHECK(img.pixels == std::vector<std::uint8_t>{77});
}

TEST_CASE("load_gray reads 2x2 P5 values row-major") {
    const auto path = temp_file("two.pgm");
    std::string data = "P5\n2 2\n255\n";
    data += char(0);
    data += char(255);
    data += char(128);
    data += char(7);
    write_bytes(path, data);
    const GrayImage img = load_gray(path);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 255, 128, 7});
}

TEST_CASE("P5 header comments are skipped") {
    const auto path = temp_file("comment.pgm");
    write_bytes(path, std::string("P5\n# a scanner comment\n1 1\n255\n") + char(9));
    CHECK(load_gray(path).pixels == std::vector<std::uint8_t>{9});
}

TEST_CASE("16-bit P5 narrows by right shift") {
    const auto path = temp_file("deep.pgm");
    std::string data = "P5\n1 1\n65535\n";
    data += char(0xab);
    data += char(0x12);
    write_bytes(path, data);
    CHECK(load_gray(path).pixels == std::vector<std::uint8_t>{0xab});
}

TEST_CASE("save/load round-trip is the identity") {
    GrayImage ramp;
    ramp.width = 3;
    ramp.height = 2;
    ramp.pixels = {0, 50, 100, 150, 200, 250};
    const auto path = temp_file("ramp.pgm");
    save_gray(ramp, path);
    CHECK(load_gray(path) == ramp);

    const GrayImage tiny = GrayImage::filled(1, 1, 42);
    save_gray(tiny, path);
    CHECK(load_gray(path) == tiny);
}

TEST_CASE("round-trip holds for random sizes and values") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dim(1, 40), val(0, 255);
    for (int trial = 0; trial < 25; ++trial) {
        GrayImage img;
        img.width = dim(rng);
        img.height = dim(rng);
        img.pixels.resize(std::size_t(img.width) * img.height);
        for (auto& p : img.pixels) p = std::uint8_t(val(rng));
        const auto path = temp_file("rand.pgm");
        save_gray(img, path);
        REQUIRE(load_gray(path) == img);
    }
}

TEST_CASE("luma of an equal-channel pixel is the channel value") {
    CHECK(luma(100, 100, 100) == 100);
    CHECK(luma(255, 255, 255) == 255);
    CHECK(luma(0, 0, 0) == 0);
    CHECK(luma(10, 20, 30) == (10 + 40 + 30) / 4);
}

TEST_CASE("PNG gray loads as-is") {
    const auto path = temp_file("gray.png");
    write_png(path, 3, 1, 1, {1, 2, 3});
    const GrayImage img = load_gray(path);
    CHECK(img.width == 3);
    CHECK(img.pixels == std::vector<std::uint8_t>{1, 2, 3});
}

TEST_CASE("PNG RGB converts by the integer luma rule") {
    const auto path = temp_file("rgb.png");
    write_png(path, 2, 1, 3, {100, 100, 100, 10, 20, 30});
    const GrayImage img = load_gray(path);
    CHECK(img.pixels == std::vector<std::uint8_t>{100, std::uint8_t((10 + 40 + 30) / 4)});
}

TEST_CASE("binary_to_gray maps foreground to ink") {
    CHECK(binary_to_gray(BinaryImage::filled(2, 2, false)).pixels ==
          std::vector<std::uint8_t>{255, 255, 255, 255});
    CHECK(binary_to_gray(BinaryImage::filled(2, 2, true)).pixels ==
          std::vector<std::uint8_t>{0, 0, 0, 0});
    BinaryImage mixed;
    mixed.width = 2;
    mixed.height = 1;
    mixed.pixels = {1, 0};
    CHECK(binary_to_gray(mixed).pixels == std::vector<std::uint8_t>{0, 255});
}

TEST_CASE("load errors are reported") {
    CHECK_THROWS_AS(load_gray(temp_file("missing.pgm")), IoError);

    const auto garbage = temp_file("garbage.bin");
    write_bytes(garbage, "GIF89a....");
    CHECK_THROWS_AS(load_gray(garbage), IoError);

    const auto zero = temp_file("zero.pgm");
    write_bytes(zero, "P5\n0 4\n255\n");
    CHECK_THROWS_AS(load_gray(zero), IoError);

    const auto truncated = temp_file("short.pgm");
    write_bytes(truncated, std::string("P5\n4 4\n255\n") + char(1));
    CHECK_THROWS_AS(load_gray(truncated), IoError);
}
