#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "braille/dots.hpp"
#include "oracles.hpp"

using namespace braille;

namespace {

BinaryImage from_rows(const std::vector<std::string>& rows) {
    BinaryImage img = BinaryImage::filled(int(rows[0].size()), int(rows.size()), false);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.set(x, y, rows[std::size_t(y)][std::size_t(x)] == '#');
    return img;
}

// Draws a filled square blob; a crude dot stand-in with width == height == side.
void blob(BinaryImage& img, int x0, int y0, int side) {
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x) img.set(x, y, true);
}

}  // namespace

TEST_CASE("connected_components of a blank image is empty") {
    CHECK(connected_components(BinaryImage::filled(8, 8, false)).empty());
}

TEST_CASE("connected_components reports a single square") {
    BinaryImage img = BinaryImage::filled(7, 7, false);
    blob(img, 2, 3, 3);
    const auto comps = connected_components(img);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].label == 1);
    CHECK(comps[0].bbox_x == 2);
    CHECK(comps[0].bbox_y == 3);
    CHECK(comps[0].width == 3);
    CHECK(comps[0].height == 3);
    CHECK(comps[0].area == 9);
    CHECK(comps[0].centroid_x == Catch::Approx(3.0));
    CHECK(comps[0].centroid_y == Catch::Approx(4.0));
}

TEST_CASE("diagonally touching pixels join under 8-connectivity") {
    const BinaryImage img = from_rows({
        "#..",
        ".#.",
        "...",
    });
    CHECK(connected_components(img).size() == 1);
}

TEST_CASE("component partition matches the flood-fill oracle") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryImage img = oracle::random_binary(rng, 32, 32, 0.25 + 0.02 * (trial % 10));
        const auto comps = connected_components(img);
        const auto labels = oracle::flood_fill_labels(img);

        int max_label = 0;
        for (int l : labels) max_label = std::max(max_label, l);
        REQUIRE(std::size_t(max_label) == comps.size());

        std::map<int, long> oracle_area;
        for (int l : labels)
            if (l) ++oracle_area[l];
        long total_area = 0;
        for (const auto& c : comps) {
            total_area += c.area;
            // The oracle numbers components in the same scan order as the library.
            REQUIRE(oracle_area.at(c.label) == c.area);
        }
        REQUIRE(std::size_t(total_area) == img.foreground_count());

        for (const auto& c : comps) {
            long sx = 0, sy = 0, n = 0;
            int x0 = img.width, x1 = -1, y0 = img.height, y1 = -1;
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x)
                    if (labels[std::size_t(y) * img.width + x] == c.label) {
                        sx += x;
                        sy += y;
                        ++n;
                        x0 = std::min(x0, x);
                        x1 = std::max(x1, x);
                        y0 = std::min(y0, y);
                        y1 = std::max(y1, y);
                    }
            REQUIRE(n == c.area);
            REQUIRE(c.bbox_x == x0);
            REQUIRE(c.bbox_y == y0);
            REQUIRE(c.width == x1 - x0 + 1);
            REQUIRE(c.height == y1 - y0 + 1);
            REQUIRE(c.centroid_x == Catch::Approx(double(sx) / n));
            REQUIRE(c.centroid_y == Catch::Approx(double(sy) / n));
            REQUIRE(c.centroid_x >= c.bbox_x);
            REQUIRE(c.centroid_x <= c.bbox_x + c.width - 1);
        }
    }
}

TEST_CASE("is_circle follows the width/height condition") {
    Component c;
    c.width = 10;
    c.height = 12;
    CHECK(is_circle(c));
    c.width = 5;
    c.height = 20;
    CHECK_FALSE(is_circle(c));
    c.width = 1;
    c.height = 1;
    CHECK(is_circle(c));
}

TEST_CASE("is_circle is symmetric in width and height") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        Component a, b;
        a.width = b.height = 1 + int(rng() % 30);
        a.height = b.width = 1 + int(rng() % 30);
        REQUIRE(is_circle(a) == is_circle(b));
    }
}

TEST_CASE("diameter is the mean of width and height") {
    Component c;
    c.width = 10;
    c.height = 12;
    CHECK(diameter(c) == 11.0);
    c.width = c.height = 8;
    CHECK(diameter(c) == 8.0);
    c.width = 9;
    c.height = 10;
    CHECK(diameter(c) == 9.5);
}

TEST_CASE("standard_diameter is the median") {
    CHECK(standard_diameter({11}) == 11.0);
    CHECK(standard_diameter({8, 11, 30}) == 11.0);  // outlier-immune
    CHECK(standard_diameter({10, 12}) == 11.0);     // even-count convention
    CHECK_THROWS_AS(standard_diameter({}), NoCirclesError);
}

TEST_CASE("filter_braille_points keeps the inclusive diameter band") {
    // Median diameter 12: accepted band is [8, 16].
    std::vector<Component> comps;
    auto add = [&](int w, int h) {
        Component c;
        c.label = int(comps.size()) + 1;
        c.width = w;
        c.height = h;
        c.area = w * h;
        c.centroid_x = 10.0 * double(comps.size());
        c.centroid_y = 5.0;
        comps.push_back(c);
    };
    add(12, 12);
    add(12, 12);
    add(8, 8);  // exactly at the lower edge: kept
    const auto kept = filter_braille_points(comps);
    REQUIRE(kept.size() == 3);
    CHECK(kept[2].diameter == 8.0);

    // A diameter just below the band is dropped while the median stays 12.
    add(12, 12);
    add(12, 12);
    add(7, 8);  // 7.5 < 8
    const auto kept2 = filter_braille_points(comps);
    CHECK(kept2.size() == 5);
}

TEST_CASE("filter_braille_points keeps identical components") {
    std::vector<Component> comps(5);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        comps[i].label = int(i) + 1;
        comps[i].width = comps[i].height = 9;
        comps[i].area = 81;
        comps[i].centroid_x = double(i) * 12;
    }
    CHECK(filter_braille_points(comps).size() == 5);
}

TEST_CASE("true dots survive among specks and a blob") {
    BinaryImage img = BinaryImage::filled(200, 60, false);
    std::vector<std::pair<int, int>> dot_origins;
    for (int i = 0; i < 10; ++i) {
        const int x = 5 + 18 * i, y = 10;
        blob(img, x, y, 10);  // true dots, diameter 10
        dot_origins.emplace_back(x, y);
    }
    for (int i = 0; i < 5; ++i) blob(img, 8 + 30 * i, 40, 2);  // specks, diameter 2
    blob(img, 155, 25, 30);                                    // one oversized blob

    const DotField field = detect_dots(connected_components(img));
    CHECK(field.standard_dot_diameter == 10.0);
    REQUIRE(field.points.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(field.points[i].x == Catch::Approx(dot_origins[i].first + 4.5));
        CHECK(field.points[i].y == Catch::Approx(dot_origins[i].second + 4.5));
        CHECK(field.points[i].diameter == 10.0);
    }
}

TEST_CASE("area totals equal the foreground count") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryImage img = oracle::random_binary(rng, 48, 24, 0.4);
        long total = 0;
        for (const auto& c : connected_components(img)) total += c.area;
        REQUIRE(std::size_t(total) == img.foreground_count());
    }
}

TEST_CASE("dot detection is scale-covariant under 2x upscaling") {
    BinaryImage img = BinaryImage::filled(120, 60, false);
    for (int i = 0; i < 4; ++i) blob(img, 10 + 25 * i, 20, 9);

    BinaryImage doubled = BinaryImage::filled(img.width * 2, img.height * 2, false);
    for (int y = 0; y < doubled.height; ++y)
        for (int x = 0; x < doubled.width; ++x) doubled.set(x, y, img.test(x / 2, y / 2));

    const auto base = detect_dots(connected_components(img));
    const auto scaled = detect_dots(connected_components(doubled));
    REQUIRE(base.points.size() == scaled.points.size());
    for (std::size_t i = 0; i < base.points.size(); ++i) {
        CHECK(std::abs(scaled.points[i].x - 2.0 * base.points[i].x) <= 1.0);
        CHECK(std::abs(scaled.points[i].y - 2.0 * base.points[i].y) <= 1.0);
        CHECK(std::abs(scaled.points[i].diameter - 2.0 * base.points[i].diameter) <= 1.0);
    }
}
