#pragma once

#include "palettekit/mcm/train.hpp"

#include <functional>
#include <span>
#include <vector>

namespace palettekit::mcm {

struct GridRow {
    int n_mask = 0;
    double accuracy = 0.0;    // fraction of masked positions predicted exactly
    double dccw = 0.0;        // mean over examples and seeds
    std::size_t positions = 0; // masked positions scored, summed over seeds

    friend bool operator==(const GridRow&, const GridRow&) = default;
};

/// Predicts one code per MASK token of `masked`, in sequence order.
using Predictor = std::function<std::vector<ColorCode>(const TokenSequence& masked, const ConditionEmbedding* cond)>;

/// Masked-prediction grid over n_mask = 1..5. For each seed and example the
/// masked positions come from derive_seed(seed, n_mask, index); predicted
/// codes become bin centers while unmasked colors stay as they are, and DCCW
/// compares that palette with the ground truth.
std::vector<GridRow> evaluate_grid(const Predictor& predict, std::span<const PaletteExample> data,
                                   std::span<const std::uint64_t> seeds, int seq_len);

std::vector<GridRow> evaluate_grid(const McmParams<float>& params, std::span<const PaletteExample> data,
                                   std::span<const std::uint64_t> seeds);

} // namespace palettekit::mcm
