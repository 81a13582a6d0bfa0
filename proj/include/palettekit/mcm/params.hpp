#pragma once

#include "palettekit/mcm/config.hpp"

#include <Eigen/Core>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

namespace palettekit::mcm {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Linear maps are stored input-major (fan_in x fan_out) and applied as
// X * W + b. Gains, offsets and biases are 1 x n rows.

template <typename T>
struct AttentionParams {
    Mat<T> norm_gain, norm_bias;
    Mat<T> wq, wk, wv, wo; // wk and wv are cond_dim x d_model for cross-attention
    Mat<T> bq, bk, bv, bo;
};

template <typename T>
struct LayerParams {
    AttentionParams<T> self_attn;
    AttentionParams<T> cross_attn; // empty matrices when unconditioned
    Mat<T> ff_norm_gain, ff_norm_bias;
    Mat<T> w1, b1, w2, b2;
};

template <typename T>
struct McmParams {
    McmConfig config;
    Mat<T> token_embedding;    // vocab x d_model
    Mat<T> position_embedding; // seq_len x d_model
    std::vector<LayerParams<T>> layers;
    Mat<T> final_norm_gain, final_norm_bias;
    Mat<T> head, head_bias; // d_model x vocab, 1 x vocab

    /// Every tensor with a stable dotted name, in serialization order.
    std::vector<std::pair<std::string, Mat<T>*>> tensors();
    std::vector<std::pair<std::string, const Mat<T>*>> tensors() const;

    std::size_t parameter_count() const;

    /// Same shapes, all zero (gradient / optimizer-state buffers).
    McmParams zeros_like() const;

    template <typename U>
    McmParams<U> cast() const;
};

/// Zero-filled parameters with the shapes implied by cfg.
template <typename T>
McmParams<T> allocate_params(const McmConfig& cfg);

/// Linear weights uniform in +-1/sqrt(fan_in), embeddings N(0, 1/d_model),
/// norm gains one, biases zero. Bit-identical for identical (cfg, seed).
template <typename T>
McmParams<T> init_params(const McmConfig& cfg, std::uint64_t seed);

template <typename T>
bool bit_identical(const McmParams<T>& a, const McmParams<T>& b);

// ---------------------------------------------------------------------------

template <typename T>
std::vector<std::pair<std::string, const Mat<T>*>> McmParams<T>::tensors() const {
    std::vector<std::pair<std::string, const Mat<T>*>> out;
    auto add = [&](std::string name, const Mat<T>& m) { out.emplace_back(std::move(name), &m); };
    auto add_attn = [&](const std::string& prefix, const AttentionParams<T>& a) {
        add(prefix + ".norm.gain", a.norm_gain);
        add(prefix + ".norm.bias", a.norm_bias);
        add(prefix + ".wq", a.wq);
        add(prefix + ".bq", a.bq);
        add(prefix + ".wk", a.wk);
        add(prefix + ".bk", a.bk);
        add(prefix + ".wv", a.wv);
        add(prefix + ".bv", a.bv);
        add(prefix + ".wo", a.wo);
        add(prefix + ".bo", a.bo);
    };
    add("token_embedding", token_embedding);
    add("position_embedding", position_embedding);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string p = "layers." + std::to_string(l);
        add_attn(p + ".self_attn", layers[l].self_attn);
        if (config.conditioned()) add_attn(p + ".cross_attn", layers[l].cross_attn);
        add(p + ".ff.norm.gain", layers[l].ff_norm_gain);
        add(p + ".ff.norm.bias", layers[l].ff_norm_bias);
        add(p + ".ff.w1", layers[l].w1);
        add(p + ".ff.b1", layers[l].b1);
        add(p + ".ff.w2", layers[l].w2);
        add(p + ".ff.b2", layers[l].b2);
    }
    add("final_norm.gain", final_norm_gain);
    add("final_norm.bias", final_norm_bias);
    add("head.weight", head);
    add("head.bias", head_bias);
    return out;
}

template <typename T>
std::vector<std::pair<std::string, Mat<T>*>> McmParams<T>::tensors() {
    auto views = std::as_const(*this).tensors();
    std::vector<std::pair<std::string, Mat<T>*>> out;
    out.reserve(views.size());
    for (auto& [name, m] : views) out.emplace_back(std::move(name), const_cast<Mat<T>*>(m));
    return out;
}

template <typename T>
std::size_t McmParams<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, m] : tensors()) n += static_cast<std::size_t>(m->size());
    return n;
}

template <typename T>
McmParams<T> McmParams<T>::zeros_like() const {
    McmParams out = *this;
    for (auto& [name, m] : out.tensors()) m->setZero();
    return out;
}

template <typename T>
template <typename U>
McmParams<U> McmParams<T>::cast() const {
    McmParams<U> out = allocate_params<U>(config);
    auto src = tensors();
    auto dst = out.tensors();
    for (std::size_t i = 0; i < src.size(); ++i) *dst[i].second = src[i].second->template cast<U>();
    return out;
}

template <typename T>
bool bit_identical(const McmParams<T>& a, const McmParams<T>& b) {
    if (!(a.config == b.config)) return false;
    auto ta = a.tensors();
    auto tb = b.tensors();
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        const auto& x = *ta[i].second;
        const auto& y = *tb[i].second;
        if (ta[i].first != tb[i].first || x.rows() != y.rows() || x.cols() != y.cols()) return false;
        if (x.size() > 0 && std::memcmp(x.data(), y.data(), sizeof(T) * static_cast<std::size_t>(x.size())) != 0)
            return false;
    }
    return true;
}

} // namespace palettekit::mcm
