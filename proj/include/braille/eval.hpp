#pragma once

// Accuracy, precision, recall, and F-measure over confusion counts, plus
// cell-aligned character comparison of two page texts.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "braille/errors.hpp"
#include "braille/translate.hpp"

namespace braille {

struct Confusion {
    long t_p = 0;
    long t_n = 0;
    long f_p = 0;
    long f_n = 0;

    long total() const { return t_p + t_n + f_p + f_n; }
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    // Set when precision/recall were 0/0 and reported as 1 by convention.
    bool degenerate = false;
};

inline Metrics metrics(const Confusion& c) {
    if (c.total() < 1) throw Error("metrics: all-zero confusion");
    Metrics m;
    m.accuracy = double(c.t_p + c.t_n) / double(c.total());
    if (c.t_p + c.f_p == 0) {
        m.precision = 1.0;
        m.degenerate = true;
    } else {
        m.precision = double(c.t_p) / double(c.t_p + c.f_p);
    }
    if (c.t_p + c.f_n == 0) {
        m.recall = 1.0;
        m.degenerate = true;
    } else {
        m.recall = double(c.t_p) / double(c.t_p + c.f_n);
    }
    m.f_measure = (m.precision + m.recall) == 0.0
                      ? 0.0
                      : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

struct CharComparison {
    Confusion confusion;
    Metrics metrics;
    long substitutions = 0;  // counted once as F_P and once as F_N
};

/// Cell-aligned exact-match comparison of predicted vs. truth text. Lines and
/// rows are padded with blanks to a common grid. A cell is T_P when non-blank
/// and equal, T_N when both blank, F_N when a non-blank truth cell was
/// predicted blank, F_P when a non-blank prediction covers a blank truth cell;
/// mismatched non-blank cells are substitutions and count once as F_P and once
/// as F_N. The table supplies the grapheme inventory for cell segmentation.
inline CharComparison char_accuracy(const std::string& predicted, const std::string& truth,
                                    const MappingTable& table) {
    auto split_cells = [&](const std::string& text) {
        std::vector<std::vector<std::string>> grid;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            const std::string line =
                text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
            grid.push_back(tokenize_graphemes(line, table));
            if (eol == std::string::npos) break;
            pos = eol + 1;
        }
        return grid;
    };
    const auto pred = split_cells(predicted);
    const auto trth = split_cells(truth);

    CharComparison cmp;
    const std::size_t lines = std::max(pred.size(), trth.size());
    for (std::size_t li = 0; li < lines; ++li) {
        const auto* pl = li < pred.size() ? &pred[li] : nullptr;
        const auto* tl = li < trth.size() ? &trth[li] : nullptr;
        const std::size_t cols = std::max(pl ? pl->size() : 0, tl ? tl->size() : 0);
        for (std::size_t ci = 0; ci < cols; ++ci) {
            const std::string p = pl && ci < pl->size() ? (*pl)[ci] : " ";
            const std::string t = tl && ci < tl->size() ? (*tl)[ci] : " ";
            const bool p_blank = p == " ", t_blank = t == " ";
            if (p_blank && t_blank) {
                ++cmp.confusion.t_n;
            } else if (p_blank) {
                ++cmp.confusion.f_n;
            } else if (t_blank) {
                ++cmp.confusion.f_p;
            } else if (p == t) {
                ++cmp.confusion.t_p;
            } else {
                ++cmp.confusion.f_p;
                ++cmp.confusion.f_n;
                ++cmp.substitutions;
            }
        }
    }
    if (cmp.confusion.total() == 0) cmp.confusion.t_n = 1;  // two empty texts agree
    cmp.metrics = metrics(cmp.confusion);
    return cmp;
}

/// Fixed-order report: the four counts, then the four metrics as percentages
/// with two decimals.
inline std::string format_report(const Confusion& c, const Metrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "T_P %ld\nF_P %ld\nT_N %ld\nF_N %ld\n"
                  "Accuracy %.2f%%\nPrecision %.2f%%\nRecall %.2f%%\nF-Measure %.2f%%\n",
                  c.t_p, c.f_p, c.t_n, c.f_n, m.accuracy * 100.0, m.precision * 100.0,
                  m.recall * 100.0, m.f_measure * 100.0);
    std::string out(buf);
    if (m.degenerate) out += "(degenerate: no positives anywhere)\n";
    return out;
}

}  // namespace braille
