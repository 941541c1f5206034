#pragma once

// Phase 1: contrast enhancement, noise removal, binarization, and dot repair.
//
// The stage order is fixed: brightness-preserving bi-histogram equalization,
// median filtering, Otsu thresholding restricted to the lower grey-scale,
// then morphological closing to re-join fragmented dots.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "braille/errors.hpp"
#include "braille/image.hpp"

namespace braille {

using Histogram = std::array<std::uint64_t, 256>;

struct PreprocessConfig {
    enum class Invert { Auto, On, Off };

    int median_window = 3;             // odd, >= 1
    int closing_radius = 1;            // 0 disables closing
    double otsu_range_fraction = 0.5;  // in (0, 1]; the "lower grey-scale" cutoff
    Invert invert_output = Invert::Auto;
    // A binarization claiming more than this fraction of the page as dot ink is
    // treated as having no dot-candidate mass (scanned pages are mostly paper).
    double max_foreground_fraction = 0.5;
};

inline Histogram histogram(const GrayImage& img) {
    Histogram h{};
    for (std::uint8_t p : img.pixels) ++h[p];
    return h;
}

/// Brightness-preserving bi-histogram equalization: the sub-images at or below
/// the mean and above it are equalized independently onto [0, m] and [m+1, 255].
/// A half holding a single distinct value maps to itself.
inline GrayImage bi_histogram_equalize(const GrayImage& img) {
    const Histogram h = histogram(img);
    std::uint64_t total = 0, sum = 0;
    for (int v = 0; v < 256; ++v) {
        total += h[v];
        sum += h[v] * std::uint64_t(v);
    }
    const int mean = int(sum / total);

    std::array<std::uint8_t, 256> lut{};
    auto equalize_half = [&](int lo_bin, int hi_bin, int out_lo, int out_hi) {
        std::uint64_t count = 0;
        int distinct = 0;
        for (int v = lo_bin; v <= hi_bin; ++v) {
            count += h[v];
            if (h[v] > 0) ++distinct;
        }
        if (count == 0) return;
        if (distinct == 1) {  // degenerate half: identity
            for (int v = lo_bin; v <= hi_bin; ++v) lut[v] = std::uint8_t(v);
            return;
        }
        std::uint64_t cdf_min = 0;
        for (int v = lo_bin; v <= hi_bin; ++v) {
            if (h[v] > 0) {
                cdf_min = h[v];
                break;
            }
        }
        std::uint64_t cdf = 0;
        for (int v = lo_bin; v <= hi_bin; ++v) {
            cdf += h[v];
            const double t = double(cdf - cdf_min) / double(count - cdf_min);
            lut[v] = std::uint8_t(out_lo + std::llround(t * (out_hi - out_lo)));
        }
    };

    equalize_half(0, mean, 0, mean);
    if (mean < 255) equalize_half(mean + 1, 255, mean + 1, 255);

    GrayImage out = img;
    for (auto& p : out.pixels) p = lut[p];
    return out;
}

/// Median of the window x window neighborhood; borders replicate edge pixels.
inline GrayImage median_filter(const GrayImage& img, int window) {
    if (window < 1 || window % 2 == 0) throw Error("median_filter: window must be odd and >= 1");
    if (window == 1) return img;
    const int r = window / 2;
    GrayImage out = img;
    std::vector<std::uint8_t> buf(std::size_t(window) * window);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::size_t n = 0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = std::clamp(y + dy, 0, img.height - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = std::clamp(x + dx, 0, img.width - 1);
                    buf[n++] = img.at(xx, yy);
                }
            }
            auto mid = buf.begin() + std::ptrdiff_t(n / 2);
            std::nth_element(buf.begin(), mid, buf.begin() + std::ptrdiff_t(n));
            out.at(x, y) = *mid;
        }
    }
    return out;
}

namespace detail {

// Exact comparison of two between-class variances num^2/den without overflow:
// quotient/remainder first, then cross-multiplied remainders.
inline bool variance_less(__int128 num_a, __int128 den_a, __int128 num_b, __int128 den_b) {
    const unsigned __int128 a2 = (unsigned __int128)(num_a < 0 ? -num_a : num_a) *
                                 (unsigned __int128)(num_a < 0 ? -num_a : num_a);
    const unsigned __int128 b2 = (unsigned __int128)(num_b < 0 ? -num_b : num_b) *
                                 (unsigned __int128)(num_b < 0 ? -num_b : num_b);
    const unsigned __int128 qa = a2 / (unsigned __int128)den_a;
    const unsigned __int128 qb = b2 / (unsigned __int128)den_b;
    if (qa != qb) return qa < qb;
    const unsigned __int128 ra = a2 % (unsigned __int128)den_a;
    const unsigned __int128 rb = b2 % (unsigned __int128)den_b;
    return ra * (unsigned __int128)den_b < rb * (unsigned __int128)den_a;
}

}  // namespace detail

/// Otsu's threshold: the t in [0, 255] maximizing the between-class variance
/// with classes {v <= t} and {v > t}. Candidates are the t where both classes
/// are nonempty; ties resolve to the smallest t. When only a single bin is
/// occupied no split exists and that bin index is returned.
inline int otsu_threshold(const Histogram& hist) {
    std::uint64_t total = 0, sum = 0;
    int lowest = -1;
    for (int v = 0; v < 256; ++v) {
        if (hist[v] > 0 && lowest < 0) lowest = v;
        total += hist[v];
        sum += hist[v] * std::uint64_t(v);
    }
    if (total == 0) throw Error("otsu_threshold: empty histogram");

    int best_t = -1;
    __int128 best_num = 0;
    __int128 best_den = 1;
    std::uint64_t w0 = 0, s0 = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        s0 += hist[t] * std::uint64_t(t);
        const std::uint64_t w1 = total - w0;
        if (w0 == 0) continue;
        if (w1 == 0) break;
        // sigma_b^2(t) = (s0*total - sum*w0)^2 / (w0*w1), up to the constant total^2
        const __int128 num = (__int128)s0 * (__int128)total - (__int128)sum * (__int128)w0;
        const __int128 den = (__int128)w0 * (__int128)w1;
        if (best_t < 0 || detail::variance_less(best_num, best_den, num, den)) {
            best_t = t;
            best_num = num;
            best_den = den;
        }
    }
    return best_t >= 0 ? best_t : lowest;
}

/// Binarizes using Otsu applied to the histogram of the lower grey-scale only
/// (bins [0, floor(255 * fraction)]). Foreground is "intensity <= t" (dots are
/// dark on a standard scan); Invert::Auto flips when the majority of the page
/// would be foreground. Throws NoDotMassError when the lower range is empty or
/// when the split claims an implausible share of the page as ink.
inline BinaryImage binarize_lower_range(const GrayImage& img, const PreprocessConfig& cfg) {
    if (!(cfg.otsu_range_fraction > 0.0 && cfg.otsu_range_fraction <= 1.0))
        throw Error("binarize_lower_range: fraction must be in (0, 1]");
    const int cutoff = int(255.0 * cfg.otsu_range_fraction);

    Histogram restricted{};
    std::uint64_t mass = 0;
    for (std::uint8_t p : img.pixels) {
        if (p <= cutoff) {
            ++restricted[p];
            ++mass;
        }
    }
    if (mass == 0) throw NoDotMassError("no dot-candidate mass in the lower grey-scale");

    const int t = otsu_threshold(restricted);
    BinaryImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    std::size_t fg = 0;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const bool ink = img.pixels[i] <= t;
        out.pixels[i] = ink ? 1 : 0;
        fg += ink;
    }

    const bool invert = cfg.invert_output == PreprocessConfig::Invert::On ||
                        (cfg.invert_output == PreprocessConfig::Invert::Auto &&
                         fg * 2 > img.pixel_count());
    if (invert) {
        for (auto& p : out.pixels) p ^= 1;
        fg = img.pixel_count() - fg;
    }
    if (double(fg) > cfg.max_foreground_fraction * double(img.pixel_count()))
        throw NoDotMassError("binarization claims too much of the page as ink");
    return out;
}

/// Dilation with a square structuring element of side 2*radius+1, computed on
/// the infinite plane (the result frame is the input frame).
inline BinaryImage dilate(const BinaryImage& img, int radius) {
    if (radius <= 0) return img;
    BinaryImage out = BinaryImage::filled(img.width, img.height, false);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (!img.test(x, y)) continue;
            const int y0 = std::max(0, y - radius), y1 = std::min(img.height - 1, y + radius);
            const int x0 = std::max(0, x - radius), x1 = std::min(img.width - 1, x + radius);
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) out.set(xx, yy, true);
        }
    return out;
}

/// Erosion with a square structuring element; outside the frame is background.
inline BinaryImage erode(const BinaryImage& img, int radius) {
    if (radius <= 0) return img;
    BinaryImage out = BinaryImage::filled(img.width, img.height, false);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            bool all = true;
            for (int dy = -radius; all && dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (!img.in_bounds(xx, yy) || !img.test(xx, yy)) {
                        all = false;
                        break;
                    }
                }
            if (all) out.set(x, y, true);
        }
    return out;
}

/// Morphological closing (dilation then erosion). The dilation is allowed to
/// grow past the image frame so the composite matches the infinite-plane
/// closing restricted to the frame; this keeps closing extensive and
/// idempotent at borders.
inline BinaryImage morphological_close(const BinaryImage& img, int radius) {
    if (radius <= 0) return img;
    BinaryImage padded = BinaryImage::filled(img.width + 2 * radius, img.height + 2 * radius, false);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.test(x, y)) padded.set(x + radius, y + radius, true);
    const BinaryImage closed = erode(dilate(padded, radius), radius);
    BinaryImage out = BinaryImage::filled(img.width, img.height, false);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.set(x, y, closed.test(x + radius, y + radius));
    return out;
}

/// The full pre-processing phase. A page with no dot-candidate mass is a valid
/// (blank) input and yields an all-background image.
inline BinaryImage preprocess(const GrayImage& img, const PreprocessConfig& cfg = {}) {
    const GrayImage enhanced = bi_histogram_equalize(img);
    const GrayImage filtered = median_filter(enhanced, cfg.median_window);
    BinaryImage binary;
    try {
        binary = binarize_lower_range(filtered, cfg);
    } catch (const NoDotMassError&) {
        return BinaryImage::filled(img.width, img.height, false);
    }
    return morphological_close(binary, cfg.closing_radius);
}

}  // namespace braille
