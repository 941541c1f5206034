#pragma once

// Embedded copy of the shipped Bengali mapping table (data/bengali.tbl).
// The default table used when no --table path is given.

#include <string_view>

namespace braille {

inline constexpr std::string_view kBengaliTableText = R"tbl(# Bengali braille mapping: one entry per line, BITS<TAB>GRAPHEME.
# BITS are dots 1..6 (left column top to bottom, then right column).
# Blank cells (000000) are word spaces and carry no entry here.

# Vowels
100000	অ
001110	আ
010100	ই
001010	ঈ
101001	উ
110011	ঊ
000010	ঋ
100010	এ
001100	ঌ
101010	ও
010101	ঔ

# Consonants
101000	ক
101101	খ
110110	গ
110001	ঘ
001101	ঙ
100100	চ
100001	ছ
010110	জ
101011	ঝ
010010	ঞ
011111	ট
010111	ঠ
110101	ড
111111	ঢ
001111	ণ
011110	ত
100111	থ
100110	দ
011101	ধ
101110	ন
111100	প
011010	ফ
110000	ব
111001	ভ
101100	ম
101111	য
111010	র
111000	ল
100101	শ
111101	ষ
011100	স
110010	হ
111110	ক্ষ
100011	জ্ঞ
110111	ড়
111011	ঢ়
010001	য়
# 000010 repeats the code of the vowel above; kept for fidelity (first entry wins).
000010	ৎ
000100	়
000011	ং
000001	ঃ
001000	ঁ

# Punctuation marks
# 010011 is reserved: the source assigns it no grapheme.
010000	,
011000	;
# 010010 repeats the code of a consonant above; kept for fidelity (first entry wins).
010010	:
011001	?
# 011010 repeats the code of a consonant above; kept for fidelity (first entry wins).
011010	!
001001	-
)tbl";

inline constexpr std::string_view kBengaliTableName = "bengali.tbl";

}  // namespace braille
