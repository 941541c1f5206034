#pragma once

// Independent test oracles: naive reference computations kept deliberately
// separate from the library's implementation paths.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "braille/image.hpp"

namespace oracle {

// Flood-fill labeling (8-connectivity). Returns a label per pixel, 0 for
// background, components numbered from 1 in scan order.
inline std::vector<int> flood_fill_labels(const braille::BinaryImage& img) {
    const int w = img.width, h = img.height;
    std::vector<int> labels(std::size_t(w) * h, 0);
    int next = 0;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!img.test(sx, sy) || labels[std::size_t(sy) * w + sx]) continue;
            ++next;
            std::deque<std::pair<int, int>> queue{{sx, sy}};
            labels[std::size_t(sy) * w + sx] = next;
            while (!queue.empty()) {
                const auto [x, y] = queue.front();
                queue.pop_front();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        if (!img.test(nx, ny) || labels[std::size_t(ny) * w + nx]) continue;
                        labels[std::size_t(ny) * w + nx] = next;
                        queue.emplace_back(nx, ny);
                    }
                }
            }
        }
    }
    return labels;
}

// Exhaustive Otsu scan: recomputes both class sums from scratch for every t
// and compares variances as exact rationals. Same documented convention as
// the library: candidates need both classes nonempty, ties go to smallest t,
// and a single occupied bin returns that bin.
inline int otsu_exhaustive(const std::array<std::uint64_t, 256>& hist) {
    long double unused;
    (void)unused;
    std::uint64_t total = 0, sum = 0;
    int lowest = -1, occupied = 0;
    for (int v = 0; v < 256; ++v) {
        if (hist[v]) {
            if (lowest < 0) lowest = v;
            ++occupied;
        }
        total += hist[v];
        sum += hist[v] * std::uint64_t(v);
    }
    if (occupied <= 1) return lowest;

    auto less_exact = [](__int128 na, unsigned __int128 da, __int128 nb, unsigned __int128 db) {
        const unsigned __int128 a2 = (unsigned __int128)(na < 0 ? -na : na) *
                                     (unsigned __int128)(na < 0 ? -na : na);
        const unsigned __int128 b2 = (unsigned __int128)(nb < 0 ? -nb : nb) *
                                     (unsigned __int128)(nb < 0 ? -nb : nb);
        const unsigned __int128 qa = a2 / da, qb = b2 / db;
        if (qa != qb) return qa < qb;
        return (a2 % da) * db < (b2 % db) * da;
    };

    int best_t = -1;
    __int128 best_num = 0;
    unsigned __int128 best_den = 1;
    for (int t = 0; t < 256; ++t) {
        std::uint64_t w0 = 0, s0 = 0;
        for (int v = 0; v <= t; ++v) {
            w0 += hist[v];
            s0 += hist[v] * std::uint64_t(v);
        }
        const std::uint64_t w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const __int128 num = (__int128)s0 * total - (__int128)sum * w0;
        const unsigned __int128 den = (unsigned __int128)w0 * w1;
        if (best_t < 0 || less_exact(best_num, best_den, num, den)) {
            best_t = t;
            best_num = num;
            best_den = den;
        }
    }
    return best_t;
}

// Brute-force median filter with edge replication: full sort per window.
inline braille::GrayImage median_brute(const braille::GrayImage& img, int window) {
    const int r = window / 2;
    braille::GrayImage out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::vector<std::uint8_t> vals;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = std::clamp(x + dx, 0, img.width - 1);
                    const int yy = std::clamp(y + dy, 0, img.height - 1);
                    vals.push_back(img.at(xx, yy));
                }
            std::sort(vals.begin(), vals.end());
            out.at(x, y) = vals[vals.size() / 2];
        }
    }
    return out;
}

// Direct-CDF bi-histogram equalization: evaluates the per-half mapping from
// first principles for a single pixel value.
inline int bbhe_expected(const std::vector<std::uint8_t>& pixels, std::uint8_t value) {
    std::uint64_t sum = 0;
    for (auto p : pixels) sum += p;
    const int mean = int(sum / pixels.size());
    const int lo = value <= mean ? 0 : mean + 1;
    const int hi = value <= mean ? mean : 255;

    std::array<std::uint64_t, 256> hist{};
    for (auto p : pixels) ++hist[p];
    std::uint64_t count = 0;
    int distinct = 0;
    for (int v = lo; v <= hi; ++v) {
        count += hist[v];
        if (hist[v]) ++distinct;
    }
    if (distinct == 1) return value;
    std::uint64_t cdf_min = 0;
    for (int v = lo; v <= hi; ++v)
        if (hist[v]) {
            cdf_min = hist[v];
            break;
        }
    std::uint64_t cdf = 0;
    for (int v = lo; v <= value; ++v) cdf += hist[v];
    const double t = double(cdf - cdf_min) / double(count - cdf_min);
    return lo + int(std::llround(t * (hi - lo)));
}

inline braille::BinaryImage random_binary(std::mt19937& rng, int w, int h, double density) {
    braille::BinaryImage img = braille::BinaryImage::filled(w, h, false);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (auto& p : img.pixels) p = dist(rng) < density ? 1 : 0;
    return img;
}

}  // namespace oracle
