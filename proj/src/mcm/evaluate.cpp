#include "palettekit/mcm/evaluate.hpp"

#include "palettekit/error.hpp"
#include "palettekit/mcm/inference.hpp"
#include "palettekit/metrics.hpp"

namespace palettekit::mcm {

std::vector<GridRow> evaluate_grid(const Predictor& predict, std::span<const PaletteExample> data,
                                   std::span<const std::uint64_t> seeds, int seq_len) {
    if (data.empty()) fail(ErrorKind::EmptyDataset, "evaluation set is empty");
    if (seeds.empty()) fail(ErrorKind::InvalidArgument, "evaluation needs at least one seed");
    for (const auto& ex : data)
        if (ex.palette.size() != 5) fail(ErrorKind::InvalidArgument, "evaluation palettes must hold 5 colors");

    std::vector<GridRow> rows;
    for (int n_mask = 1; n_mask <= 5; ++n_mask) {
        GridRow row{n_mask, 0.0, 0.0, 0};
        for (std::uint64_t seed : seeds) {
            std::size_t hits = 0;
            std::size_t positions = 0;
            double dccw_sum = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                const auto& ex = data[i];
                const auto masked = apply_masking(tokenize_palette(ex.palette, static_cast<std::size_t>(seq_len)),
                                                  n_mask, derive_seed(seed, n_mask, i));
                const auto codes = predict(masked.tokens, ex.condition);
                if (codes.size() != masked.targets.size())
                    fail(ErrorKind::ShapeMismatch, "predictor returned the wrong number of codes");
                std::vector<LabColor> colors(ex.palette.begin(), ex.palette.end());
                for (std::size_t t = 0; t < codes.size(); ++t) {
                    hits += codes[t] == masked.targets[t].code;
                    colors[masked.targets[t].position - 1] = dequantize(codes[t]);
                }
                positions += codes.size();
                dccw_sum += dccw(Palette(std::move(colors)), ex.palette);
            }
            row.accuracy += static_cast<double>(hits) / static_cast<double>(positions);
            row.dccw += dccw_sum / static_cast<double>(data.size());
            row.positions += positions;
        }
        row.accuracy /= static_cast<double>(seeds.size());
        row.dccw /= static_cast<double>(seeds.size());
        rows.push_back(row);
    }
    return rows;
}

std::vector<GridRow> evaluate_grid(const McmParams<float>& params, std::span<const PaletteExample> data,
                                   std::span<const std::uint64_t> seeds) {
    Predictor predict = [&](const TokenSequence& masked, const ConditionEmbedding* cond) {
        return predict_codes(params, masked, cond);
    };
    return evaluate_grid(predict, data, seeds, params.config.seq_len);
}

} // namespace palettekit::mcm
