#pragma once

// Small overlay-drawing helpers for the stage-inspection dumps.

#include <algorithm>
#include <cmath>

#include "braille/geometry.hpp"
#include "braille/image.hpp"
#include "braille/translate.hpp"

namespace braille {

inline void draw_pixel(GrayImage& img, int x, int y, std::uint8_t value) {
    if (img.in_bounds(x, y)) img.at(x, y) = value;
}

inline void draw_line(GrayImage& img, double x0, double y0, double x1, double y1,
                      std::uint8_t value) {
    const double steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
    const int n = std::max(1, int(std::ceil(steps)));
    for (int i = 0; i <= n; ++i) {
        const double t = double(i) / n;
        draw_pixel(img, int(std::lround(x0 + (x1 - x0) * t)), int(std::lround(y0 + (y1 - y0) * t)),
                   value);
    }
}

inline void draw_circle(GrayImage& img, double cx, double cy, double radius, std::uint8_t value) {
    const int n = std::max(8, int(radius * 8.0));
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        draw_pixel(img, int(std::lround(cx + radius * std::cos(a))),
                   int(std::lround(cy + radius * std::sin(a))), value);
    }
}

inline void draw_cross(GrayImage& img, double cx, double cy, double half, std::uint8_t value) {
    draw_line(img, cx - half, cy - half, cx + half, cy + half, value);
    draw_line(img, cx - half, cy + half, cx + half, cy - half, value);
}

/// Draws a margin line across the whole image frame.
inline void draw_margin_line(GrayImage& img, const MarginLine& line, std::uint8_t value) {
    if (line.horizontal())
        draw_line(img, 0, line.value_at(0), img.width - 1, line.value_at(img.width - 1), value);
    else
        draw_line(img, line.value_at(0), 0, line.value_at(img.height - 1), img.height - 1, value);
}

/// Draws every cell boundary of the grid (rotated rectangles around the dot
/// sub-regions, half a gap outward from the outer dot centers).
inline void draw_grid(GrayImage& img, const CellGrid& grid, std::uint8_t value) {
    const BrailleStructure& s = grid.structure;
    const double mx = s.char_gap / 2.0, my = s.line_gap / 2.0;
    for (int line = 0; line < grid.lines(); ++line) {
        for (int col = 0; col < grid.columns(); ++col) {
            const double u0 = col * s.cell_advance() - mx;
            const double u1 = col * s.cell_advance() + s.char_width + mx;
            const double v0 = line * s.line_advance() - my;
            const double v1 = line * s.line_advance() + s.char_height + my;
            auto corner = [&](double u, double v) {
                return Vec2{s.origin_x + u * grid.u_x + v * grid.v_x,
                            s.origin_y + u * grid.u_y + v * grid.v_y};
            };
            const Vec2 a = corner(u0, v0), b = corner(u1, v0), c = corner(u1, v1),
                       d = corner(u0, v1);
            draw_line(img, a.x, a.y, b.x, b.y, value);
            draw_line(img, b.x, b.y, c.x, c.y, value);
            draw_line(img, c.x, c.y, d.x, d.y, value);
            draw_line(img, d.x, d.y, a.x, a.y, value);
        }
    }
}

}  // namespace braille
