#pragma once

// Ground-truth page generator: renders known text as a synthetic scanned
// braille page (faint dark discs on bright textured paper) with controlled
// geometry and degradations, and records everything needed to score a
// recognition run against it.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "braille/errors.hpp"
#include "braille/geometry.hpp"
#include "braille/image.hpp"
#include "braille/translate.hpp"

namespace braille::synth {

struct SynthSpec {
    std::vector<std::string> text_lines;  // UTF-8, one string per braille line

    double dot_diameter = 9.0;
    double dot_pitch = 10.0;     // intra-cell spacing between dot centers
    double cell_advance = 24.0;  // char_width + char_gap
    double line_advance = 30.0;  // char_height + line_gap
    double margin = 40.0;
    double rotation = 0.0;       // degrees
    double dot_contrast = 60.0;  // dot darkness below the paper level

    double noise_salt_pepper = 0.0;   // fraction of pixels hit
    double noise_gaussian_sigma = 0.0;
    double dot_jitter = 0.0;          // uniform center perturbation, pixels
    double dot_dropout = 0.0;         // probability a dot is never drawn

    std::uint32_t seed = 1;

    static constexpr double kPaperLevel = 235.0;
    static constexpr double kPaperTextureSigma = 2.0;
};

/// Everything the evaluation side needs: the drawn dot centers (after
/// rotation, jitter, and dropout), the per-cell codes as drawn, the injected
/// salt-and-pepper mask, and the structure the renderer laid the page out with.
struct GroundTruth {
    SynthSpec spec;
    std::vector<Vec2> dot_centers;
    std::vector<std::vector<BrailleCode>> cell_codes;  // post-dropout
    std::vector<std::vector<BrailleCode>> intended_codes;
    std::vector<std::uint8_t> noise_mask;  // per pixel, salt-and-pepper hits
    BrailleStructure structure;

    /// The page text as actually embossed (post-dropout codes through the table).
    std::string drawn_text(const MappingTable& table) const {
        return translate_page(cell_codes, table).text;
    }
    std::string intended_text(const MappingTable& table) const {
        return translate_page(intended_codes, table).text;
    }
};

namespace detail {

// Portable deterministic draws: identical sequences for a seed on every
// platform, unlike the standard distributions.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : engine_(seed) {}

    double uniform01() { return (double(engine_()) + 0.5) / 4294967296.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double gaussian() {
        const double u1 = uniform01(), u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937 engine_;
};

inline std::uint8_t clamp_intensity(double v) {
    return std::uint8_t(std::clamp(v, 0.0, 255.0) + 0.5);
}

// Disc coverage with a soft one-pixel rim.
inline double disc_coverage(double distance, double radius) {
    if (distance <= radius - 0.5) return 1.0;
    if (distance >= radius + 0.5) return 0.0;
    return radius + 0.5 - distance;
}

}  // namespace detail

/// Renders the spec into a grayscale page plus its ground truth. Deterministic
/// for a given (spec, seed). Throws Error naming the grapheme when the text
/// holds something the table cannot encode.
inline std::pair<GrayImage, GroundTruth> render(const SynthSpec& spec, const MappingTable& table) {
    if (!(spec.dot_pitch > spec.dot_diameter))
        throw Error("synth: dot_pitch must exceed dot_diameter");
    if (!(spec.cell_advance >= spec.dot_pitch + spec.dot_diameter + 1.0))
        throw Error("synth: cell_advance too small for a two-column cell");

    const auto reverse = table.reverse();
    std::vector<std::vector<BrailleCode>> intended;
    std::size_t cols = 0;
    for (const std::string& line : spec.text_lines) {
        std::vector<BrailleCode> row;
        for (const std::string& token : tokenize_graphemes(line, table)) {
            if (token == " ") {
                row.emplace_back();
                continue;
            }
            const auto it = reverse.find(token);
            if (it == reverse.end()) throw Error("synth: no code for grapheme \"" + token + "\"");
            row.push_back(it->second);
        }
        cols = std::max(cols, row.size());
        intended.push_back(std::move(row));
    }
    const int n_cols = int(cols);
    const int n_lines = int(intended.size());
    for (auto& row : intended) row.resize(cols);  // pad with blanks

    const double p = spec.dot_pitch;
    const double extent_x = n_cols > 0 ? (n_cols - 1) * spec.cell_advance + p : 0.0;
    const double extent_y = n_lines > 0 ? (n_lines - 1) * spec.line_advance + 2.0 * p : 0.0;
    const int width = std::max(16, int(std::lround(2.0 * spec.margin + extent_x + spec.dot_diameter)));
    const int height = std::max(16, int(std::lround(2.0 * spec.margin + extent_y + spec.dot_diameter)));

    detail::Rng rng(spec.seed);
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(std::size_t(width) * height);
    for (auto& px : img.pixels)
        px = detail::clamp_intensity(SynthSpec::kPaperLevel +
                                     rng.gaussian() * SynthSpec::kPaperTextureSigma);

    GroundTruth truth;
    truth.spec = spec;
    truth.intended_codes = intended;
    truth.cell_codes.assign(std::size_t(n_lines), std::vector<BrailleCode>(cols));
    truth.noise_mask.assign(img.pixels.size(), 0);

    const double theta = spec.rotation * std::numbers::pi / 180.0;
    const double cx = width / 2.0, cy = height / 2.0;
    const double c = std::cos(theta), s = std::sin(theta);
    auto rotate = [&](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        return Vec2{cx + dx * c - dy * s, cy + dx * s + dy * c};
    };

    const double first = spec.margin + spec.dot_diameter / 2.0;
    const double radius = spec.dot_diameter / 2.0;
    const double dot_level = SynthSpec::kPaperLevel - spec.dot_contrast;

    for (int line = 0; line < n_lines; ++line) {
        for (int col = 0; col < n_cols; ++col) {
            const BrailleCode code = intended[std::size_t(line)][std::size_t(col)];
            BrailleCode drawn;
            for (int d = 1; d <= 6; ++d) {
                if (!code.dot(d)) continue;
                if (rng.uniform01() < spec.dot_dropout) continue;
                double jx = 0.0, jy = 0.0;
                if (spec.dot_jitter > 0.0) {
                    jx = rng.uniform(-spec.dot_jitter, spec.dot_jitter);
                    jy = rng.uniform(-spec.dot_jitter, spec.dot_jitter);
                }
                const double lx =
                    first + col * spec.cell_advance + (d >= 4 ? p : 0.0) + jx;
                const double ly = first + line * spec.line_advance + ((d - 1) % 3) * p + jy;
                const Vec2 center = rotate(lx, ly);
                drawn.set_dot(d, true);
                truth.dot_centers.push_back(center);

                const int x0 = std::max(0, int(std::floor(center.x - radius - 1.0)));
                const int x1 = std::min(width - 1, int(std::ceil(center.x + radius + 1.0)));
                const int y0 = std::max(0, int(std::floor(center.y - radius - 1.0)));
                const int y1 = std::min(height - 1, int(std::ceil(center.y + radius + 1.0)));
                for (int y = y0; y <= y1; ++y) {
                    for (int x = x0; x <= x1; ++x) {
                        const double dist = std::hypot(x - center.x, y - center.y);
                        const double cov = detail::disc_coverage(dist, radius);
                        if (cov <= 0.0) continue;
                        auto& px = img.at(x, y);
                        px = detail::clamp_intensity(double(px) * (1.0 - cov) + dot_level * cov);
                    }
                }
            }
            truth.cell_codes[std::size_t(line)][std::size_t(col)] = drawn;
        }
    }

    if (spec.noise_gaussian_sigma > 0.0)
        for (auto& px : img.pixels)
            px = detail::clamp_intensity(double(px) + rng.gaussian() * spec.noise_gaussian_sigma);
    if (spec.noise_salt_pepper > 0.0) {
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            if (rng.uniform01() < spec.noise_salt_pepper) {
                img.pixels[i] = rng.uniform01() < 0.5 ? 0 : 255;
                truth.noise_mask[i] = 1;
            }
        }
    }

    BrailleStructure st;
    const Vec2 origin = rotate(first, first);
    st.origin_x = origin.x;
    st.origin_y = origin.y;
    st.rotation = theta;
    st.char_width = p;
    st.char_height = 2.0 * p;
    st.char_gap = spec.cell_advance - p;
    st.line_gap = spec.line_advance - 2.0 * p;
    st.chars_per_line = std::max(1, n_cols);
    st.line_count = std::max(1, n_lines);
    st.dot_diameter = spec.dot_diameter;
    truth.structure = st;
    return {std::move(img), std::move(truth)};
}

struct DotConfusion {
    long t_p = 0;
    long f_p = 0;
    long f_n = 0;
    long t_n = 0;  // empty grid dot positions
};

/// Greedy nearest-pair matching of found dots against the drawn truth dots
/// within tol. Order-independent: pairs are consumed globally by distance.
inline DotConfusion compare_dots(const std::vector<BraillePoint>& found, const GroundTruth& truth,
                                 double tol) {
    if (!(tol > 0.0)) throw Error("compare_dots: tol must be positive");
    struct Pair {
        double dist;
        std::size_t fi, ti;
    };
    std::vector<Pair> pairs;
    for (std::size_t fi = 0; fi < found.size(); ++fi) {
        for (std::size_t ti = 0; ti < truth.dot_centers.size(); ++ti) {
            const double d = std::hypot(found[fi].x - truth.dot_centers[ti].x,
                                        found[fi].y - truth.dot_centers[ti].y);
            if (d <= tol) pairs.push_back({d, fi, ti});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.fi != b.fi) return a.fi < b.fi;
        return a.ti < b.ti;
    });
    std::vector<bool> f_used(found.size(), false), t_used(truth.dot_centers.size(), false);
    long matched = 0;
    for (const Pair& pr : pairs) {
        if (f_used[pr.fi] || t_used[pr.ti]) continue;
        f_used[pr.fi] = t_used[pr.ti] = true;
        ++matched;
    }
    DotConfusion c;
    c.t_p = matched;
    c.f_p = long(found.size()) - matched;
    c.f_n = long(truth.dot_centers.size()) - matched;
    const long grid_positions =
        6L * truth.structure.chars_per_line * truth.structure.line_count;
    c.t_n = grid_positions - long(truth.dot_centers.size());
    return c;
}

/// Parses a synth spec file: `key = value` lines, then the text block between
/// `---` delimiters.
inline SynthSpec parse_spec(std::istream& in) {
    SynthSpec spec;
    std::string line;
    bool in_text = false;
    bool saw_text_block = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "---") {
            if (!in_text && !saw_text_block) {
                in_text = true;
                saw_text_block = true;
                continue;
            }
            in_text = false;
            continue;
        }
        if (in_text) {
            spec.text_lines.push_back(line);
            continue;
        }
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw IoError("synth spec: expected `key = value`: " + line);
        std::string key = trimmed.substr(0, eq);
        std::string value = trimmed.substr(eq + 1);
        auto strip = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
        };
        strip(key);
        strip(value);
        try {
            if (key == "dot_diameter") spec.dot_diameter = std::stod(value);
            else if (key == "dot_pitch") spec.dot_pitch = std::stod(value);
            else if (key == "cell_advance") spec.cell_advance = std::stod(value);
            else if (key == "line_advance") spec.line_advance = std::stod(value);
            else if (key == "margin") spec.margin = std::stod(value);
            else if (key == "rotation") spec.rotation = std::stod(value);
            else if (key == "dot_contrast") spec.dot_contrast = std::stod(value);
            else if (key == "noise_salt_pepper") spec.noise_salt_pepper = std::stod(value);
            else if (key == "noise_gaussian_sigma") spec.noise_gaussian_sigma = std::stod(value);
            else if (key == "dot_jitter") spec.dot_jitter = std::stod(value);
            else if (key == "dot_dropout") spec.dot_dropout = std::stod(value);
            else if (key == "seed") spec.seed = std::uint32_t(std::stoul(value));
            else throw IoError("synth spec: unknown key: " + key);
        } catch (const std::invalid_argument&) {
            throw IoError("synth spec: bad value for " + key + ": " + value);
        }
    }
    return spec;
}

inline SynthSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open synth spec: " + path.string());
    return parse_spec(in);
}

/// Truth sidecar reduced to what evaluation needs.
struct TruthData {
    BrailleStructure structure;
    std::vector<Vec2> dots;
    std::vector<std::vector<BrailleCode>> cells;
};

inline void write_truth(const GroundTruth& truth, std::ostream& out) {
    const BrailleStructure& s = truth.structure;
    out.precision(10);
    out << "origin_x " << s.origin_x << "\n"
        << "origin_y " << s.origin_y << "\n"
        << "rotation " << s.rotation << "\n"
        << "char_width " << s.char_width << "\n"
        << "char_height " << s.char_height << "\n"
        << "char_gap " << s.char_gap << "\n"
        << "line_gap " << s.line_gap << "\n"
        << "chars_per_line " << s.chars_per_line << "\n"
        << "line_count " << s.line_count << "\n"
        << "delta_s " << s.dot_diameter << "\n";
    for (const Vec2& d : truth.dot_centers) out << "dot " << d.x << " " << d.y << "\n";
    for (std::size_t li = 0; li < truth.cell_codes.size(); ++li)
        for (std::size_t ci = 0; ci < truth.cell_codes[li].size(); ++ci)
            out << "cell " << li << " " << ci << " "
                << truth.cell_codes[li][ci].to_string() << "\n";
}

inline void write_truth_file(const GroundTruth& truth, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write truth sidecar: " + path.string());
    write_truth(truth, out);
}

inline TruthData read_truth(std::istream& in) {
    TruthData data;
    std::string key;
    std::map<std::pair<int, int>, BrailleCode> cells;
    int max_line = -1, max_col = -1;
    while (in >> key) {
        if (key == "dot") {
            Vec2 v;
            in >> v.x >> v.y;
            data.dots.push_back(v);
        } else if (key == "cell") {
            int li, ci;
            std::string code;
            in >> li >> ci >> code;
            const auto parsed = BrailleCode::parse(code);
            if (!parsed) throw IoError("truth sidecar: bad cell code: " + code);
            cells[{li, ci}] = *parsed;
            max_line = std::max(max_line, li);
            max_col = std::max(max_col, ci);
        } else {
            double value;
            in >> value;
            BrailleStructure& s = data.structure;
            if (key == "origin_x") s.origin_x = value;
            else if (key == "origin_y") s.origin_y = value;
            else if (key == "rotation") s.rotation = value;
            else if (key == "char_width") s.char_width = value;
            else if (key == "char_height") s.char_height = value;
            else if (key == "char_gap") s.char_gap = value;
            else if (key == "line_gap") s.line_gap = value;
            else if (key == "chars_per_line") s.chars_per_line = int(value);
            else if (key == "line_count") s.line_count = int(value);
            else if (key == "delta_s") s.dot_diameter = value;
            else throw IoError("truth sidecar: unknown key: " + key);
        }
    }
    data.cells.assign(std::size_t(max_line + 1), std::vector<BrailleCode>(std::size_t(max_col + 1)));
    for (const auto& [pos, code] : cells)
        data.cells[std::size_t(pos.first)][std::size_t(pos.second)] = code;
    return data;
}

inline TruthData load_truth(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open truth sidecar: " + path.string());
    return read_truth(in);
}

}  // namespace braille::synth
