#pragma once

// Phase 3: project the cell grid onto the binary image, read a 6-bit code per
// cell, and map codes to graphemes through a loadable table.
//
// Dot numbering is the standard one: 1,2,3 down the left column, 4,5,6 down
// the right. The text form of a code is the 6 bits in dot order 1..6.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "braille/errors.hpp"
#include "braille/geometry.hpp"
#include "braille/image.hpp"

namespace braille {

class BrailleCode {
public:
    BrailleCode() = default;
    explicit BrailleCode(std::uint8_t bits) : bits_(bits & 0x3f) {}

    /// Presence of dot i (1..6).
    bool dot(int i) const { return (bits_ >> (i - 1)) & 1; }
    void set_dot(int i, bool present) {
        if (present)
            bits_ |= std::uint8_t(1u << (i - 1));
        else
            bits_ &= std::uint8_t(~(1u << (i - 1)));
    }
    std::uint8_t value() const { return bits_; }
    bool blank() const { return bits_ == 0; }
    int dot_count() const { return std::popcount(unsigned(bits_)); }

    /// Canonical 6-character 0/1 text form, dot order 1..6.
    std::string to_string() const {
        std::string s(6, '0');
        for (int i = 1; i <= 6; ++i)
            if (dot(i)) s[std::size_t(i - 1)] = '1';
        return s;
    }

    static std::optional<BrailleCode> parse(std::string_view text) {
        if (text.size() != 6) return std::nullopt;
        std::uint8_t bits = 0;
        for (int i = 0; i < 6; ++i) {
            if (text[std::size_t(i)] == '1')
                bits |= std::uint8_t(1u << i);
            else if (text[std::size_t(i)] != '0')
                return std::nullopt;
        }
        return BrailleCode(bits);
    }

    bool operator==(const BrailleCode&) const = default;

private:
    std::uint8_t bits_ = 0;
};

/// Code-to-grapheme table. Duplicate keys follow the collision policy:
/// FirstWins keeps the earliest entry and records a warning, Error throws.
class MappingTable {
public:
    enum class CollisionPolicy { FirstWins, Error };

    struct Entry {
        BrailleCode code;
        std::string grapheme;
    };

    MappingTable() { index_.fill(-1); }

    const std::string& name() const { return name_; }
    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    std::optional<std::string_view> lookup(BrailleCode code) const {
        const int idx = index_[code.value()];
        if (idx < 0) return std::nullopt;
        return std::string_view(entries_[std::size_t(idx)].grapheme);
    }

    /// Grapheme-to-code map, first entry winning for repeated graphemes.
    std::unordered_map<std::string, BrailleCode> reverse() const {
        std::unordered_map<std::string, BrailleCode> rev;
        for (const Entry& e : entries_) rev.emplace(e.grapheme, e.code);
        return rev;
    }

    static MappingTable parse(std::string_view text, std::string name,
                              CollisionPolicy policy = CollisionPolicy::FirstWins) {
        MappingTable table;
        table.name_ = std::move(name);
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                                   : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
                line.remove_suffix(1);
            if (line.empty() || line.front() == '#') continue;

            const std::size_t tab = line.find('\t');
            if (tab == std::string_view::npos)
                throw TableError("mapping line has no tab separator", line_no);
            const auto code = BrailleCode::parse(line.substr(0, tab));
            if (!code) throw TableError("mapping line has a malformed code", line_no);
            std::string_view grapheme = line.substr(tab + 1);
            while (!grapheme.empty() && (grapheme.front() == ' ' || grapheme.front() == '\t'))
                grapheme.remove_prefix(1);
            if (grapheme.empty()) throw TableError("mapping line has an empty grapheme", line_no);

            if (table.index_[code->value()] >= 0) {
                if (policy == CollisionPolicy::Error)
                    throw TableError("duplicate code " + code->to_string(), line_no);
                const auto& kept = table.entries_[std::size_t(table.index_[code->value()])];
                table.warnings_.push_back("duplicate code " + code->to_string() + " on line " +
                                          std::to_string(line_no) + ": keeping \"" + kept.grapheme +
                                          "\", ignoring \"" + std::string(grapheme) + "\"");
                continue;
            }
            table.index_[code->value()] = int(table.entries_.size());
            table.entries_.push_back({*code, std::string(grapheme)});
        }
        return table;
    }

private:
    std::string name_;
    std::vector<Entry> entries_;
    std::array<int, 64> index_{};
    std::vector<std::string> warnings_;
};

/// Loads a mapping table from a UTF-8 text file: one `BITS<TAB>GRAPHEME` entry
/// per line, `#` lines are comments, blank lines ignored.
inline MappingTable load_mapping(const std::filesystem::path& path,
                                 MappingTable::CollisionPolicy policy =
                                     MappingTable::CollisionPolicy::FirstWins) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open mapping table: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return MappingTable::parse(buf.str(), path.filename().string(), policy);
}

/// Marker emitted for cells whose code has no table entry.
inline constexpr std::string_view kUnknownMarker = "\xe2\x8d\xb0";  // U+2370

namespace detail {

inline std::size_t utf8_sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xe) return 3;
    if ((lead >> 3) == 0x1e) return 4;
    return 1;
}

}  // namespace detail

/// Splits one line of text into cell-sized tokens: longest match against the
/// table's graphemes (so multi-codepoint entries hold together), " " for a
/// blank cell, the unknown marker for itself, and single codepoints otherwise.
inline std::vector<std::string> tokenize_graphemes(std::string_view line,
                                                   const MappingTable& table) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        if (line[pos] == ' ') {
            tokens.emplace_back(" ");
            ++pos;
            continue;
        }
        std::string_view best;
        for (const auto& e : table.entries()) {
            if (e.grapheme.size() > best.size() && line.substr(pos, e.grapheme.size()) == e.grapheme)
                best = e.grapheme;
        }
        if (best.empty() && line.substr(pos, kUnknownMarker.size()) == kUnknownMarker)
            best = kUnknownMarker;
        if (!best.empty()) {
            tokens.emplace_back(best);
            pos += best.size();
        } else {
            const std::size_t len =
                std::min(detail::utf8_sequence_length((unsigned char)line[pos]), line.size() - pos);
            tokens.emplace_back(line.substr(pos, len));
            pos += len;
        }
    }
    return tokens;
}

/// The cell grid implied by a structure: line_count x chars_per_line cells,
/// each with six dot sub-regions centered on the expected dot positions
/// (columns at {0, char_width}, rows at {0, char_height/2, char_height} of the
/// cell origin), all rotated about the writing origin.
struct CellGrid {
    BrailleStructure structure;
    double u_x = 1.0, u_y = 0.0;  // unit vector along a text row
    double v_x = 0.0, v_y = 1.0;  // unit vector down the lines
    double subregion_side = 0.0;

    int lines() const { return structure.line_count; }
    int columns() const { return structure.chars_per_line; }

    /// Center of dot d (1..6) of cell (line, col) in image coordinates.
    Vec2 dot_center(int line, int col, int d) const {
        const double cell_u = col * structure.cell_advance();
        const double cell_v = line * structure.line_advance();
        const double du = (d >= 4) ? structure.char_width : 0.0;
        const double dv = ((d - 1) % 3) * (structure.char_height / 2.0);
        const double u = cell_u + du, v = cell_v + dv;
        return {structure.origin_x + u * u_x + v * v_x, structure.origin_y + u * u_y + v * v_y};
    }
};

inline CellGrid build_grid(const BrailleStructure& s) {
    CellGrid grid;
    grid.structure = s;
    grid.u_x = std::cos(s.rotation);
    grid.u_y = std::sin(s.rotation);
    grid.v_x = -grid.u_y;
    grid.v_y = grid.u_x;
    // Square sampling window around each expected dot center, wide enough for
    // a dot but clamped so neighboring sub-regions cannot overlap.
    double side = std::max(s.dot_diameter, s.char_width / 2.0);
    side = std::min({side, s.char_width, s.char_height / 2.0,
                     s.char_gap > 0.5 ? s.char_gap : side, s.line_gap > 0.5 ? s.line_gap : side});
    grid.subregion_side = std::max(2.0, side);
    return grid;
}

/// Reads one cell: dot i is present when its sub-region holds at least
/// fill_threshold of the expected dot area (pi/4 * delta_s^2) in foreground.
inline BrailleCode read_cell(const BinaryImage& img, const CellGrid& grid, int line, int col,
                             double fill_threshold = 0.15) {
    const double half = grid.subregion_side / 2.0;
    const double expected_area =
        std::numbers::pi / 4.0 * grid.structure.dot_diameter * grid.structure.dot_diameter;
    const double needed = fill_threshold * expected_area;

    BrailleCode code;
    for (int d = 1; d <= 6; ++d) {
        const Vec2 c = grid.dot_center(line, col, d);
        const double reach = half * std::numbers::sqrt2;
        const int x0 = std::max(0, int(std::floor(c.x - reach)));
        const int x1 = std::min(img.width - 1, int(std::ceil(c.x + reach)));
        const int y0 = std::max(0, int(std::floor(c.y - reach)));
        const int y1 = std::min(img.height - 1, int(std::ceil(c.y + reach)));
        long count = 0;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (!img.test(x, y)) continue;
                const double dx = x - c.x, dy = y - c.y;
                const double lu = dx * grid.u_x + dy * grid.u_y;
                const double lv = dx * grid.v_x + dy * grid.v_y;
                if (std::abs(lu) <= half && std::abs(lv) <= half) ++count;
            }
        }
        code.set_dot(d, double(count) >= needed);
    }
    return code;
}

struct UnknownCode {
    int line = 0;
    int col = 0;
    BrailleCode code;
};

struct TranslationResult {
    std::string text;
    std::vector<UnknownCode> unknowns;
};

/// Maps a page of codes to text: blank cells become spaces, unknown codes the
/// replacement marker (with a diagnostic record). Trailing spaces per line and
/// trailing blank lines are trimmed; lines join with LF.
inline TranslationResult translate_page(const std::vector<std::vector<BrailleCode>>& codes,
                                        const MappingTable& table) {
    TranslationResult result;
    std::vector<std::string> lines;
    for (std::size_t li = 0; li < codes.size(); ++li) {
        std::string line;
        for (std::size_t ci = 0; ci < codes[li].size(); ++ci) {
            const BrailleCode code = codes[li][ci];
            if (code.blank()) {
                line += ' ';
            } else if (auto g = table.lookup(code)) {
                line += *g;
            } else {
                line += kUnknownMarker;
                result.unknowns.push_back({int(li), int(ci), code});
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        lines.push_back(std::move(line));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) result.text += '\n';
        result.text += lines[i];
    }
    return result;
}

}  // namespace braille
