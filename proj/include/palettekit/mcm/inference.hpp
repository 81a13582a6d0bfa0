#pragma once

#include "palettekit/mcm/model.hpp"

#include <vector>

namespace palettekit::mcm {

/// Greedy fill: every MASK position gets its argmax code (lowest code on
/// ties), all at once.
template <typename T>
std::vector<ColorCode> predict_codes(const McmParams<T>& params, const TokenSequence& masked,
                                     const ConditionEmbedding* cond);

/// Completes the masked slots with the bin centers of the predicted codes.
/// Unmasked colors pass through unchanged. Throws NoMaskedSlots when nothing
/// is masked.
template <typename T>
Palette predict_masked(const McmParams<T>& params, const MaskedPalette& palette, const ConditionEmbedding* cond);

/// Final-layer state at the PSTART position.
template <typename T>
std::vector<T> embed_palette(const McmParams<T>& params, const Palette& palette, const ConditionEmbedding* cond);

} // namespace palettekit::mcm
