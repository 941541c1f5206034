#pragma once

// Phase 2b/2c: marginal points, margin lines, writing origin and rotation,
// peer-distance pitch analysis, and the assembled page structure.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "braille/dots.hpp"
#include "braille/errors.hpp"

namespace braille {

enum class Side { Upper, Lower, Left, Right };
enum class Axis { Horizontal, Vertical };

/// A fitted margin line. Horizontal sides are y = slope*x + intercept,
/// vertical sides x = slope*y + intercept; thickness is the band width used
/// while fitting (the standard dot diameter) and support the number of
/// marginal points inside that band.
struct MarginLine {
    Side side = Side::Upper;
    double slope = 0.0;
    double intercept = 0.0;
    double thickness = 0.0;
    int support = 0;

    bool horizontal() const { return side == Side::Upper || side == Side::Lower; }

    double value_at(double t) const { return slope * t + intercept; }

    /// Perpendicular distance from a point to the line.
    double distance(double x, double y) const {
        // horizontal: slope*x - y + intercept = 0; vertical: slope*y - x + intercept = 0
        const double num = horizontal() ? slope * x - y + intercept : slope * y - x + intercept;
        return std::abs(num) / std::hypot(slope, 1.0);
    }

    /// Deviation from the side's ideal orientation (horizontal for upper/lower,
    /// vertical for left/right), as a rotation angle in radians.
    double angle() const { return horizontal() ? std::atan(slope) : -std::atan(slope); }
};

/// The seven properties of the geometric writing structure plus the standard
/// dot diameter. Distances are center-to-center: char_width spans a cell's two
/// dot columns, char_height its three dot rows, char_gap/line_gap the space to
/// the next cell's first column/row.
struct BrailleStructure {
    double origin_x = 0.0;       // start point of writing
    double origin_y = 0.0;
    double rotation = 0.0;       // radians
    double char_width = 0.0;
    double char_height = 0.0;
    double char_gap = 0.0;
    double line_gap = 0.0;
    int chars_per_line = 0;
    int line_count = 0;
    double dot_diameter = 0.0;   // standard dot diameter of the batch

    double cell_advance() const { return char_width + char_gap; }
    double line_advance() const { return char_height + line_gap; }
};

/// Per-stripe extremal points for one side. Stripes of breadth delta_s run
/// across the relevant axis; each nonempty stripe contributes its extremal
/// point (minimal y for Upper, maximal y for Lower, minimal x for Left,
/// maximal x for Right). Ties resolve to smaller x, then smaller y.
inline std::vector<BraillePoint> marginal_points(const std::vector<BraillePoint>& points,
                                                 Side side, double delta_s) {
    if (points.empty()) throw Error("marginal_points: no points");
    if (!(delta_s > 0.0)) throw Error("marginal_points: delta_s must be positive");

    const bool stripes_along_x = (side == Side::Upper || side == Side::Lower);
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : points) lo = std::min(lo, stripes_along_x ? p.x : p.y);

    auto better = [&](const BraillePoint& a, const BraillePoint& b) {
        double ka, kb;
        switch (side) {
            case Side::Upper: ka = a.y, kb = b.y; break;
            case Side::Lower: ka = -a.y, kb = -b.y; break;
            case Side::Left: ka = a.x, kb = b.x; break;
            default: ka = -a.x, kb = -b.x; break;
        }
        if (ka != kb) return ka < kb;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    };

    std::vector<std::optional<BraillePoint>> best;
    for (const auto& p : points) {
        const double coord = stripes_along_x ? p.x : p.y;
        const auto stripe = std::size_t((coord - lo) / delta_s);
        if (stripe >= best.size()) best.resize(stripe + 1);
        if (!best[stripe] || better(p, *best[stripe])) best[stripe] = p;
    }
    std::vector<BraillePoint> out;
    for (const auto& b : best)
        if (b) out.push_back(*b);
    return out;
}

/// Fits the margin line: the line through a pair of marginal points that holds
/// the maximum number of marginal points within a band of width delta_s
/// (ties: least sum of squared distances), refined by least squares over its
/// supporters when that does not lose support. A single point degenerates to
/// the zero-slope line through it.
inline MarginLine fit_margin_line(const std::vector<BraillePoint>& marginals, Side side,
                                  double delta_s) {
    if (marginals.empty()) throw Error("fit_margin_line: no marginal points");
    const bool horiz = (side == Side::Upper || side == Side::Lower);

    // Work in (t, u) where the ideal line is u = const: t is x for horizontal
    // sides and y for vertical sides.
    struct TU {
        double t, u;
    };
    std::vector<TU> pts;
    pts.reserve(marginals.size());
    for (const auto& p : marginals) pts.push_back(horiz ? TU{p.x, p.y} : TU{p.y, p.x});

    auto band_stats = [&](double slope, double intercept, int& support, double& ssd) {
        support = 0;
        ssd = 0.0;
        const double norm = std::hypot(slope, 1.0);
        for (const auto& p : pts) {
            const double d = std::abs(slope * p.t - p.u + intercept) / norm;
            if (d <= delta_s / 2.0) {
                ++support;
                ssd += d * d;
            }
        }
    };

    double best_slope = 0.0, best_intercept = pts[0].u;
    int best_support = 0;
    double best_ssd = 0.0;
    band_stats(best_slope, best_intercept, best_support, best_ssd);

    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dt = pts[j].t - pts[i].t;
            if (std::abs(dt) < 1e-9) continue;  // parallel to the ideal normal; skip
            const double slope = (pts[j].u - pts[i].u) / dt;
            const double intercept = pts[i].u - slope * pts[i].t;
            int support;
            double ssd;
            band_stats(slope, intercept, support, ssd);
            if (support > best_support || (support == best_support && ssd < best_ssd)) {
                best_slope = slope;
                best_intercept = intercept;
                best_support = support;
                best_ssd = ssd;
            }
        }
    }

    // Least-squares refinement over the supporting set, kept only if it does
    // not lose support.
    {
        const double norm = std::hypot(best_slope, 1.0);
        double st = 0, su = 0, stt = 0, stu = 0;
        int n = 0;
        for (const auto& p : pts) {
            const double d = std::abs(best_slope * p.t - p.u + best_intercept) / norm;
            if (d <= delta_s / 2.0) {
                st += p.t;
                su += p.u;
                stt += p.t * p.t;
                stu += p.t * p.u;
                ++n;
            }
        }
        const double det = n * stt - st * st;
        if (n >= 2 && std::abs(det) > 1e-9) {
            const double slope = (n * stu - st * su) / det;
            const double intercept = (su - slope * st) / n;
            int support;
            double ssd;
            band_stats(slope, intercept, support, ssd);
            if (support >= best_support) {
                best_slope = slope;
                best_intercept = intercept;
                best_support = support;
            }
        }
    }

    MarginLine line;
    line.side = side;
    line.slope = best_slope;
    line.intercept = best_intercept;
    line.thickness = delta_s;
    line.support = best_support;
    return line;
}

/// Start point of writing (intersection of the upper and left margin lines)
/// and writing rotation (mean of the four lines' deviation angles).
inline std::pair<Vec2, double> structure_origin_and_rotation(const MarginLine& upper,
                                                             const MarginLine& lower,
                                                             const MarginLine& left,
                                                             const MarginLine& right) {
    // upper: y = a + m*x, left: x = b + n*y
    const double m = upper.slope, a = upper.intercept;
    const double n = left.slope, b = left.intercept;
    const double denom = 1.0 - m * n;
    if (std::abs(denom) < 1e-9)
        throw StructuralError("degenerate page: upper and left margin lines are parallel");
    const double y = (a + m * b) / denom;
    const double x = b + n * y;
    const double theta =
        (upper.angle() + lower.angle() + left.angle() + right.angle()) / 4.0;
    return {Vec2{x, y}, theta};
}

using FrequencyVector = std::vector<double>;

/// Frequencies of adjacent marginal-point distances along an axis, rounded to
/// the nearest integer pixel and indexed by distance.
inline FrequencyVector peer_distance_histogram(std::vector<BraillePoint> marginals, Axis axis) {
    if (marginals.size() < 2) throw Error("peer_distance_histogram: need at least 2 points");
    std::sort(marginals.begin(), marginals.end(), [&](const auto& a, const auto& b) {
        return axis == Axis::Horizontal ? a.x < b.x : a.y < b.y;
    });
    FrequencyVector freq;
    for (std::size_t i = 0; i + 1 < marginals.size(); ++i) {
        const double d = axis == Axis::Horizontal ? marginals[i + 1].x - marginals[i].x
                                                  : marginals[i + 1].y - marginals[i].y;
        const auto bin = std::size_t(std::llround(d));
        if (bin >= freq.size()) freq.resize(bin + 1, 0.0);
        freq[bin] += 1.0;
    }
    return freq;
}

/// Centered n-point running mean with edge truncation (the window shrinks at
/// the boundaries).
inline FrequencyVector running_mean(const FrequencyVector& freq, int n) {
    if (n < 1 || n % 2 == 0) throw Error("running_mean: n must be odd and >= 1");
    if (n == 1 || freq.empty()) return freq;
    const int k = n / 2;
    const int size = int(freq.size());
    FrequencyVector out(freq.size());
    for (int i = 0; i < size; ++i) {
        const int lo = std::max(0, i - k), hi = std::min(size - 1, i + k);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += freq[std::size_t(j)];
        out[std::size_t(i)] = sum / double(hi - lo + 1);
    }
    return out;
}

struct PitchPair {
    double small = 0.0;
    double large = 0.0;
};

namespace detail {

struct Peak {
    int index;
    double curvature;  // f(i-1) - 2 f(i) + f(i+1); negative at peaks
};

inline std::vector<Peak> curvature_peaks(const FrequencyVector& f) {
    std::vector<Peak> peaks;
    const int n = int(f.size());
    for (int i = 1; i + 1 < n; ++i) {
        const double c = f[std::size_t(i - 1)] - 2.0 * f[std::size_t(i)] + f[std::size_t(i + 1)];
        if (c >= 0.0) continue;
        const double cl = i >= 2 ? f[std::size_t(i - 2)] - 2.0 * f[std::size_t(i - 1)] + f[std::size_t(i)]
                                 : std::numeric_limits<double>::infinity();
        const double cr = i + 2 < n ? f[std::size_t(i)] - 2.0 * f[std::size_t(i + 1)] + f[std::size_t(i + 2)]
                                    : std::numeric_limits<double>::infinity();
        if (c <= cl && c <= cr) peaks.push_back({i, c});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.curvature != b.curvature) return a.curvature < b.curvature;
        return a.index < b.index;
    });
    return peaks;
}

}  // namespace detail

/// Picks the two locations of most negative discrete second derivative
/// (strongest peaks) in the smoothed frequency vector, returned as
/// (smaller location, larger location). Throws PitchError with the dominant
/// pitch attached when fewer than two separated peaks exist.
inline PitchPair extract_two_pitches(const FrequencyVector& smoothed, int* extra_peaks = nullptr) {
    const auto peaks = detail::curvature_peaks(smoothed);
    if (extra_peaks) {
        *extra_peaks = 0;
        if (peaks.size() > 2) {
            const double bar = peaks[1].curvature / 2.0;
            for (std::size_t i = 2; i < peaks.size(); ++i)
                if (peaks[i].curvature <= bar) ++*extra_peaks;
        }
    }
    if (peaks.empty()) throw PitchError("pitch extraction failed: no peaks");
    // The second peak must be a separate location, not the shoulder of the first.
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        if (std::abs(peaks[i].index - peaks[0].index) > 1) {
            const double a = peaks[0].index, b = peaks[i].index;
            return {std::min(a, b), std::max(a, b)};
        }
    }
    throw PitchError("pitch extraction failed: single dominant pitch",
                     double(peaks[0].index));
}

/// Diagnostics preserved from structure estimation: the raw pitch pairs, the
/// grid advances chosen from them, and which fallbacks fired.
struct StructureDiagnostics {
    PitchPair horizontal_raw{};
    PitchPair vertical_raw{};
    double cell_advance = 0.0;
    double line_advance = 0.0;
    int extra_peaks_horizontal = 0;
    int extra_peaks_vertical = 0;
    bool horizontal_single_pitch = false;
    bool vertical_single_pitch = false;
    double fold_score_horizontal = 0.0;
    double fold_score_vertical = 0.0;
};

namespace detail {

// Mean distance of folded grid coordinates to the nearest expected offset;
// low scores mean the (pitch, advance) hypothesis matches the point cloud.
inline double fold_score(const std::vector<double>& coords, double advance,
                         const std::vector<double>& offsets) {
    if (coords.empty() || !(advance > 0.0)) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (double c : coords) {
        double r = std::fmod(c, advance);
        if (r < 0) r += advance;
        double best = std::numeric_limits<double>::infinity();
        for (double off : offsets) {
            const double d = std::abs(r - off);
            best = std::min(best, std::min(d, advance - d));
        }
        total += best;
    }
    return total / double(coords.size());
}

struct PitchChoice {
    double pitch;    // center-to-center span of one character along the axis
    double advance;  // grid step to the next character along the axis
    double score;
};

// Adjacent marginal distances mix the intra-cell pitch with one of several
// inter-cell gaps depending on which dots the text happens to populate. Each
// (pitch, advance) hypothesis consistent with the two observed peaks is scored
// against the full point cloud folded onto the candidate grid.
inline PitchChoice choose_pitch(const PitchPair& peaks, const std::vector<double>& coords,
                                int rows_per_cell) {
    const double s = peaks.small, l = peaks.large;
    std::vector<std::pair<double, double>> hypotheses;  // (intra pitch, advance)
    if (rows_per_cell == 2) {
        hypotheses = {{s, s + l}, {s, l}, {l - s, l}};
    } else {
        hypotheses = {{s, 2 * s + l}, {s, s + l}, {s, l}, {(l - s) / 2.0, l}};
    }
    PitchChoice best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (const auto& [pitch, advance] : hypotheses) {
        if (!(pitch > 0.5) || advance < double(rows_per_cell) * pitch - 0.5) continue;
        std::vector<double> offsets;
        for (int r = 0; r < rows_per_cell; ++r) offsets.push_back(r * pitch);
        const double score = fold_score(coords, advance, offsets);
        if (score < best.score) best = {pitch, advance, score};
    }
    if (!(best.advance > 0.0)) throw PitchError("pitch extraction failed: no consistent grid");
    return best;
}

}  // namespace detail

/// Recovers the full geometric writing structure from the Braille Point cloud:
/// margin lines on all four sides, origin and rotation from their geometry,
/// pitches from the peer-distance distributions of the upper and left marginal
/// points, and the character/line counts from the text extent.
inline BrailleStructure estimate_structure(const std::vector<BraillePoint>& points,
                                           double delta_s,
                                           StructureDiagnostics* diagnostics = nullptr) {
    if (points.size() < 4) throw StructuralError("too few braille points to recover a structure");

    const auto upper_pts = marginal_points(points, Side::Upper, delta_s);
    const auto lower_pts = marginal_points(points, Side::Lower, delta_s);
    const auto left_pts = marginal_points(points, Side::Left, delta_s);
    const auto right_pts = marginal_points(points, Side::Right, delta_s);
    if (upper_pts.size() < 2 || left_pts.size() < 2)
        throw StructuralError("braille points span too few stripes");

    const MarginLine upper = fit_margin_line(upper_pts, Side::Upper, delta_s);
    const MarginLine lower = fit_margin_line(lower_pts, Side::Lower, delta_s);
    const MarginLine left = fit_margin_line(left_pts, Side::Left, delta_s);
    const MarginLine right = fit_margin_line(right_pts, Side::Right, delta_s);

    const auto [origin, theta] = structure_origin_and_rotation(upper, lower, left, right);
    if (std::abs(theta) >= std::numbers::pi / 8.0)
        throw StructuralError("recovered rotation is implausibly large");

    StructureDiagnostics diag;

    // Grid coordinates of every point in the rotated frame anchored at the origin.
    const double ux = std::cos(theta), uy = std::sin(theta);
    std::vector<double> along_u, along_v;
    along_u.reserve(points.size());
    along_v.reserve(points.size());
    for (const auto& p : points) {
        const double dx = p.x - origin.x, dy = p.y - origin.y;
        along_u.push_back(dx * ux + dy * uy);
        along_v.push_back(-dx * uy + dy * ux);
    }

    auto analyze_axis = [&](const std::vector<BraillePoint>& marginals, Axis axis,
                            int rows_per_cell, PitchPair& raw, int& extra, bool& single_pitch,
                            const std::vector<double>& coords) {
        const FrequencyVector freq = peer_distance_histogram(marginals, axis);
        const FrequencyVector smooth = running_mean(freq, 3);
        try {
            raw = extract_two_pitches(smooth, &extra);
        } catch (const PitchError& e) {
            if (!e.has_dominant_pitch()) throw;
            // Single dominant pitch: assume it is the intra-cell pitch and let
            // the fold score pick the advance among small multiples.
            single_pitch = true;
            raw = {e.dominant_pitch(), e.dominant_pitch() * double(rows_per_cell)};
        }
        return detail::choose_pitch(raw, coords, rows_per_cell);
    };

    const auto h = analyze_axis(upper_pts, Axis::Horizontal, 2, diag.horizontal_raw,
                                diag.extra_peaks_horizontal, diag.horizontal_single_pitch,
                                along_u);
    const auto v = analyze_axis(left_pts, Axis::Vertical, 3, diag.vertical_raw,
                                diag.extra_peaks_vertical, diag.vertical_single_pitch, along_v);
    diag.cell_advance = h.advance;
    diag.line_advance = v.advance;
    diag.fold_score_horizontal = h.score;
    diag.fold_score_vertical = v.score;

    BrailleStructure s;
    s.origin_x = origin.x;
    s.origin_y = origin.y;
    s.rotation = theta;
    s.dot_diameter = delta_s;
    s.char_width = h.pitch;
    s.char_gap = h.advance - h.pitch;
    s.char_height = 2.0 * v.pitch;
    s.line_gap = v.advance - s.char_height;

    // Text extent between opposite margin lines, measured center to center.
    const double y_mid = (origin.y + lower.value_at(origin.x)) / 2.0;
    const double left_x = left.value_at(y_mid);
    const double text_width = right.distance(left_x, y_mid);
    const double x_mid = (origin.x + right.value_at(origin.y)) / 2.0;
    const double upper_y = upper.value_at(x_mid);
    const double text_height = lower.distance(x_mid, upper_y);

    s.chars_per_line =
        std::max(1, int(std::llround((text_width + s.char_gap) / (s.char_width + s.char_gap))));
    s.line_count =
        std::max(1, int(std::llround((text_height + s.line_gap) / (s.char_height + s.line_gap))));

    if (diagnostics) *diagnostics = diag;
    return s;
}

}  // namespace braille
