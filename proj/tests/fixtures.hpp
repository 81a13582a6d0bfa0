#pragma once

#include "palettekit/color.hpp"
#include "palettekit/condition.hpp"
#include "palettekit/mcm/model.hpp"
#include "palettekit/mcm/params.hpp"
#include "palettekit/rng.hpp"
#include "palettekit/tokens.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

using namespace palettekit;
using namespace palettekit::mcm;

inline McmConfig tiny(bool conditioned, int heads = 2) {
    McmConfig cfg;
    cfg.d_model = 8;
    cfg.n_layers = 1;
    cfg.n_heads = heads;
    cfg.seq_len = 5;
    if (conditioned) {
        cfg.conditioning = Conditioning::Cross;
        cfg.cond_dim = 16;
    }
    return make_config(cfg);
}

// Initialized parameters with gains and biases moved off their defaults so
// every tensor takes part in the checks.
template <typename T>
McmParams<T> scrambled(const McmConfig& cfg, std::uint64_t seed) {
    auto p = init_params<T>(cfg, seed);
    Rng rng(seed ^ 0xABCDEF);
    for (auto& [name, m] : p.tensors()) {
        const bool gain = name.find("gain") != std::string::npos;
        const bool bias = name.find("bias") != std::string::npos || name.find(".b") != std::string::npos;
        if (gain)
            for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = static_cast<T>(1.0 + rng.uniform(-0.3, 0.3));
        else if (bias)
            for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = static_cast<T>(rng.uniform(-0.2, 0.2));
    }
    return p;
}

inline Palette random_palette(Rng& rng, int k) {
    std::vector<LabColor> c;
    for (int i = 0; i < k; ++i) c.emplace_back(rng.uniform(0, 100), rng.uniform(-128, 128), rng.uniform(-128, 128));
    return Palette(c);
}

inline TokenSequence random_tokens(Rng& rng, std::size_t seq_len, bool with_masks) {
    const int k = 1 + static_cast<int>(rng.below(seq_len - 2));
    auto seq = tokenize_palette(random_palette(rng, k), seq_len);
    if (with_masks) seq = apply_masking(seq, 1 + static_cast<int>(rng.below(k)), rng.next()).tokens;
    return seq;
}

struct GradCheck {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::size_t refined = 0; // entries re-differenced in long double
    std::size_t zeros = 0;   // gradients that vanish identically (both sides at round-off)
    double worst = 0.0;      // largest relative error over the remaining entries
    std::string first_failure;
};

// Five-point central differences on every parameter entry, compared by
// relative error. Entries whose double-precision quotient is not clearly
// within tolerance (round-off of the loss dominates tiny gradients) are
// differenced again in long double.
inline GradCheck finite_difference_check(McmParams<double> params, std::span<const TrainingExample> batch,
                                         double h = 1e-4, double tolerance = 1e-4) {
    auto grads = params.zeros_like();
    Model<double>(params).loss(batch, &grads);
    auto tensors = params.tensors();
    const auto gtensors = std::as_const(grads).tensors();

    std::optional<McmParams<long double>> wide;
    auto wide_quotient = [&](std::size_t t, Eigen::Index i) {
        if (!wide) wide = params.cast<long double>();
        auto& m = *wide->tensors()[t].second;
        const long double orig = m.data()[i];
        const long double step = h;
        auto at = [&](long double x) {
            m.data()[i] = x;
            return Model<long double>(*wide).loss(batch);
        };
        const long double q =
            (8 * (at(orig + step) - at(orig - step)) - (at(orig + 2 * step) - at(orig - 2 * step))) / (12 * step);
        m.data()[i] = orig;
        return static_cast<double>(q);
    };

    GradCheck r;
    for (std::size_t t = 0; t < tensors.size(); ++t) {
        auto& m = *tensors[t].second;
        const auto& g = *gtensors[t].second;
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            const double orig = m.data()[i];
            auto at = [&](double x) {
                m.data()[i] = x;
                return Model<double>(params).loss(batch);
            };
            double numeric = (8.0 * (at(orig + h) - at(orig - h)) - (at(orig + 2 * h) - at(orig - 2 * h))) / (12 * h);
            m.data()[i] = orig;
            const double analytic = g.data()[i];
            auto rel = [&] {
                return std::abs(numeric - analytic) / std::max(std::abs(numeric), std::abs(analytic));
            };
            ++r.checked;
            if (numeric == analytic) continue;
            if (!(rel() < 0.1 * tolerance)) {
                numeric = wide_quotient(t, i);
                ++r.refined;
            }
            if (std::abs(numeric) <= 1e-15 && std::abs(analytic) <= 1e-15) {
                ++r.zeros;
                continue;
            }
            r.worst = std::max(r.worst, rel());
            if (!(rel() < tolerance) && r.failed++ == 0)
                r.first_failure = tensors[t].first + "[" + std::to_string(i) + "] analytic " +
                                  std::to_string(analytic) + " numeric " + std::to_string(numeric);
        }
    }
    return r;
}

// Three short examples, one of them padded, for the gradient checks.
inline std::vector<TrainingExample> gradient_batch(Rng& rng, const std::vector<ConditionEmbedding>* conds) {
    std::vector<TrainingExample> batch;
    for (int i = 0; i < 3; ++i) {
        const auto p = random_palette(rng, 2 + i % 2);
        const auto m = apply_masking(tokenize_palette(p, 5), 1 + i % 2, rng.next());
        batch.push_back({m.tokens, m.targets, conds ? &(*conds)[static_cast<std::size_t>(i)] : nullptr});
    }
    return batch;
}

} // namespace testsupport
