#pragma once

// End-to-end page translation: the three phases wired together.

#include <string>
#include <vector>

#include "braille/dots.hpp"
#include "braille/errors.hpp"
#include "braille/geometry.hpp"
#include "braille/image.hpp"
#include "braille/preprocess.hpp"
#include "braille/translate.hpp"

namespace braille {

struct PipelineConfig {
    PreprocessConfig preprocess;
    double fill_threshold = 0.15;
};

struct PageResult {
    std::string text;
    bool blank = false;  // page had nothing resembling a dot; text is empty
    BrailleStructure structure{};
    std::vector<std::vector<BrailleCode>> codes;
    std::vector<UnknownCode> unknowns;
    StructureDiagnostics diagnostics{};
};

/// Runs preprocess, dot detection, structure recovery, grid projection, and
/// table translation on one page. A page with no foreground at all degrades to
/// an empty (blank) result; pages whose geometry cannot be recovered throw
/// StructuralError.
inline PageResult translate_image(const GrayImage& img, const MappingTable& table,
                                  const PipelineConfig& cfg = {}) {
    PageResult result;

    const BinaryImage binary = preprocess(img, cfg.preprocess);
    const auto components = connected_components(binary);
    if (components.empty()) {
        result.blank = true;
        return result;
    }

    const DotField dots = detect_dots(components);
    result.structure =
        estimate_structure(dots.points, dots.standard_dot_diameter, &result.diagnostics);

    const CellGrid grid = build_grid(result.structure);
    result.codes.assign(std::size_t(grid.lines()),
                        std::vector<BrailleCode>(std::size_t(grid.columns())));
    for (int line = 0; line < grid.lines(); ++line)
        for (int col = 0; col < grid.columns(); ++col)
            result.codes[std::size_t(line)][std::size_t(col)] =
                read_cell(binary, grid, line, col, cfg.fill_threshold);

    TranslationResult tr = translate_page(result.codes, table);
    result.text = std::move(tr.text);
    result.unknowns = std::move(tr.unknowns);
    return result;
}

}  // namespace braille
