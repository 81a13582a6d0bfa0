#include "palettekit/mcm/inference.hpp"

#include "palettekit/error.hpp"

#include <algorithm>

namespace palettekit::mcm {

template <typename T>
std::vector<ColorCode> predict_codes(const McmParams<T>& params, const TokenSequence& masked,
                                     const ConditionEmbedding* cond) {
    const Mat<T> logits = forward(params, masked, cond);
    std::vector<ColorCode> out;
    for (std::size_t i = 0; i < masked.size(); ++i) {
        if (masked[i].kind() != TokenKind::Mask) continue;
        int best = 0;
        for (int c = 1; c < ColorCode::kCount; ++c)
            if (logits(static_cast<Eigen::Index>(i), c) > logits(static_cast<Eigen::Index>(i), best)) best = c;
        out.emplace_back(best);
    }
    return out;
}

template <typename T>
Palette predict_masked(const McmParams<T>& params, const MaskedPalette& palette, const ConditionEmbedding* cond) {
    if (std::none_of(palette.begin(), palette.end(), [](const auto& s) { return !s.has_value(); }))
        fail(ErrorKind::NoMaskedSlots, "palette has no masked slots to predict");
    const auto tokens = tokenize_masked(palette, static_cast<std::size_t>(params.config.seq_len));
    const auto codes = predict_codes(params, tokens, cond);
    std::vector<LabColor> colors;
    std::size_t next = 0;
    for (const auto& slot : palette) colors.push_back(slot ? *slot : dequantize(codes[next++]));
    return Palette(std::move(colors));
}

template <typename T>
std::vector<T> embed_palette(const McmParams<T>& params, const Palette& palette, const ConditionEmbedding* cond) {
    const auto tokens = tokenize_palette(palette, static_cast<std::size_t>(params.config.seq_len));
    const Mat<T> h = Model<T>(params).hidden(tokens, cond);
    return std::vector<T>(h.row(0).data(), h.row(0).data() + h.cols());
}

template std::vector<ColorCode> predict_codes<float>(const McmParams<float>&, const TokenSequence&,
                                                     const ConditionEmbedding*);
template std::vector<ColorCode> predict_codes<double>(const McmParams<double>&, const TokenSequence&,
                                                      const ConditionEmbedding*);
template Palette predict_masked<float>(const McmParams<float>&, const MaskedPalette&, const ConditionEmbedding*);
template Palette predict_masked<double>(const McmParams<double>&, const MaskedPalette&, const ConditionEmbedding*);
template std::vector<float> embed_palette<float>(const McmParams<float>&, const Palette&, const ConditionEmbedding*);
template std::vector<double> embed_palette<double>(const McmParams<double>&, const Palette&,
                                                   const ConditionEmbedding*);

} // namespace palettekit::mcm
