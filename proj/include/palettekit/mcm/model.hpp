#pragma once

#include "palettekit/color.hpp"
#include "palettekit/condition.hpp"
#include "palettekit/mcm/params.hpp"
#include "palettekit/rng.hpp"
#include "palettekit/tokens.hpp"

#include <span>
#include <vector>

namespace palettekit::mcm {

struct MaskTarget {
    int position = 0;
    ColorCode code;

    friend bool operator==(const MaskTarget&, const MaskTarget&) = default;
};

struct MaskedSequence {
    TokenSequence tokens;
    std::vector<MaskTarget> targets;
};

/// Replaces n_mask distinct color positions with MASK, chosen uniformly
/// without replacement. Framing and PAD tokens are never touched.
MaskedSequence apply_masking(const TokenSequence& tokens, int n_mask, std::uint64_t seed);

struct TrainingExample {
    TokenSequence tokens;
    std::vector<MaskTarget> targets;
    const ConditionEmbedding* condition = nullptr;
};

/// Pre-norm transformer over color tokens. Every layer runs self-attention
/// restricted to non-PAD keys, then (conditioned models only) cross-attention
/// whose keys and values are projections of the condition rows, then a GELU
/// feed-forward block. Sequences may be shorter than config.seq_len; they use
/// the leading position embeddings.
template <typename T>
class Model {
public:
    explicit Model(const McmParams<T>& params) : params_(params) {}

    /// Logits at every position, tokens.size() x vocab.
    Mat<T> logits(const TokenSequence& tokens, const ConditionEmbedding* cond) const;

    /// Final-norm hidden states, tokens.size() x d_model.
    Mat<T> hidden(const TokenSequence& tokens, const ConditionEmbedding* cond) const;

    /// Mean cross-entropy over all target positions in the batch. When
    /// `grads` is given it must have the parameter shapes and receives the
    /// gradient (overwritten). `dropout_rng` enables dropout; nullptr means
    /// evaluation mode.
    T loss(std::span<const TrainingExample> batch, McmParams<T>* grads = nullptr, Rng* dropout_rng = nullptr) const;

private:
    const McmParams<T>& params_;
};

extern template class Model<float>;
extern template class Model<double>;
extern template class Model<long double>;

template <typename T>
Mat<T> forward(const McmParams<T>& params, const TokenSequence& tokens, const ConditionEmbedding* cond) {
    return Model<T>(params).logits(tokens, cond);
}

template <typename T>
T loss_and_grads(const McmParams<T>& params, std::span<const TrainingExample> batch, McmParams<T>& grads) {
    return Model<T>(params).loss(batch, &grads);
}

/// Row-wise softmax of a logit matrix.
template <typename T>
Mat<T> softmax_rows(const Mat<T>& logits);

} // namespace palettekit::mcm
