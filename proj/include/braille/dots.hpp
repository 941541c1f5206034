#pragma once

// Phase 2a: connected components, circle qualification, standard dot diameter,
// and the Braille Point filter.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "braille/errors.hpp"
#include "braille/image.hpp"

namespace braille {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Component {
    int label = 0;       // 1-based, assigned in top-left raster order
    int bbox_x = 0;
    int bbox_y = 0;
    int width = 0;       // bounding-box width
    int height = 0;      // bounding-box height
    long area = 0;       // foreground pixel count
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

/// A connected component accepted as a genuine dot; (x, y) is its centroid.
struct BraillePoint {
    double x = 0.0;
    double y = 0.0;
    double diameter = 0.0;
};

/// 8-connectivity labeling of foreground pixels. Components are reported in
/// the raster order of their first (top-left-most) pixel, labels 1..k.
inline std::vector<Component> connected_components(const BinaryImage& img) {
    const int w = img.width, h = img.height;
    const std::size_t n = img.pixels.size();
    if (n == 0) return {};

    std::vector<std::int32_t> parent(n, -1);
    auto find = [&](std::int32_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    auto unite = [&](std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t i = std::int32_t(y) * w + x;
            if (!img.pixels[i]) continue;
            parent[i] = i;
            if (x > 0 && img.pixels[i - 1]) unite(i, i - 1);
            if (y > 0) {
                const std::int32_t up = i - w;
                if (img.pixels[up]) unite(i, up);
                if (x > 0 && img.pixels[up - 1]) unite(i, up - 1);
                if (x + 1 < w && img.pixels[up + 1]) unite(i, up + 1);
            }
        }
    }

    std::vector<std::int32_t> root_to_index(n, -1);
    std::vector<Component> components;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t i = std::int32_t(y) * w + x;
            if (parent[i] < 0) continue;
            const std::int32_t root = find(i);
            std::int32_t idx = root_to_index[root];
            if (idx < 0) {
                idx = std::int32_t(components.size());
                root_to_index[root] = idx;
                Component c;
                c.label = idx + 1;
                c.bbox_x = x;
                c.bbox_y = y;
                c.width = 1;
                c.height = 1;
                components.push_back(c);
            }
            Component& c = components[std::size_t(idx)];
            const int x1 = std::max(c.bbox_x + c.width - 1, x);
            const int y1 = std::max(c.bbox_y + c.height - 1, y);
            c.bbox_x = std::min(c.bbox_x, x);
            c.bbox_y = std::min(c.bbox_y, y);
            c.width = x1 - c.bbox_x + 1;
            c.height = y1 - c.bbox_y + 1;
            c.area += 1;
            c.centroid_x += x;  // accumulate, normalized below
            c.centroid_y += y;
        }
    }
    for (Component& c : components) {
        c.centroid_x /= double(c.area);
        c.centroid_y /= double(c.area);
    }
    return components;
}

/// Circle qualification: |width - height| <= min(width, height).
inline bool is_circle(const Component& c) {
    return std::abs(c.width - c.height) <= std::min(c.width, c.height);
}

/// Approximate diameter of a circle-shaped component: (width + height) / 2.
inline double diameter(const Component& c) {
    return (c.width + c.height) / 2.0;
}

/// Standard Braille Dot Diameter: median of the candidate diameters
/// (mean of the two middle values for even counts).
inline double standard_diameter(std::vector<double> diameters) {
    if (diameters.empty()) throw NoCirclesError("no circle candidates on the page");
    std::sort(diameters.begin(), diameters.end());
    const std::size_t n = diameters.size();
    if (n % 2 == 1) return diameters[n / 2];
    return (diameters[n / 2 - 1] + diameters[n / 2]) / 2.0;
}

struct DotField {
    std::vector<BraillePoint> points;
    double standard_dot_diameter = 0.0;
};

/// Keeps circle-shaped components whose diameter lies in the inclusive band
/// [2/3, 4/3] of the standard dot diameter; also reports that diameter.
inline DotField detect_dots(const std::vector<Component>& components) {
    std::vector<const Component*> circles;
    std::vector<double> diameters;
    for (const Component& c : components) {
        if (is_circle(c)) {
            circles.push_back(&c);
            diameters.push_back(diameter(c));
        }
    }
    DotField field;
    field.standard_dot_diameter = standard_diameter(diameters);  // throws when empty
    const double lo = 2.0 * field.standard_dot_diameter / 3.0;
    const double hi = 4.0 * field.standard_dot_diameter / 3.0;
    for (const Component* c : circles) {
        const double d = diameter(*c);
        if (d >= lo && d <= hi) field.points.push_back({c->centroid_x, c->centroid_y, d});
    }
    return field;
}

/// The matched dots as Braille Points, centroids as coordinates.
inline std::vector<BraillePoint> filter_braille_points(const std::vector<Component>& components) {
    return detect_dots(components).points;
}

}  // namespace braille
