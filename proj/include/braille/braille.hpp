#pragma once

// Umbrella header for the whole library.

#include "braille/draw.hpp"
#include "braille/dots.hpp"
#include "braille/errors.hpp"
#include "braille/eval.hpp"
#include "braille/geometry.hpp"
#include "braille/image.hpp"
#include "braille/pipeline.hpp"
#include "braille/preprocess.hpp"
#include "braille/synth.hpp"
#include "braille/tables.hpp"
#include "braille/translate.hpp"
