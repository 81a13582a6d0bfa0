#pragma once

#include <cstdint>
#include <json.hpp>
#include <string_view>

namespace palettekit::mcm {

enum class Conditioning { None, Cross };

std::string_view to_string(Conditioning c) noexcept;
Conditioning conditioning_from_string(std::string_view s);

struct McmConfig {
    static constexpr int kVocabSize = 4100;

    int d_model = 768;
    int n_layers = 4;
    int n_heads = 8;
    int d_ff = 0; // 0 selects 4 * d_model
    int seq_len = 8;
    Conditioning conditioning = Conditioning::None;
    int cond_dim = 0;
    double dropout = 0.0;

    int ff_width() const noexcept { return d_ff > 0 ? d_ff : 4 * d_model; }
    int head_dim() const noexcept { return d_model / n_heads; }
    bool conditioned() const noexcept { return conditioning == Conditioning::Cross; }

    /// Throws InvalidConfig when an invariant is broken.
    void validate() const;

    friend bool operator==(const McmConfig&, const McmConfig&) = default;
};

/// Validates before returning.
McmConfig make_config(const McmConfig& fields);

nlohmann::json to_json(const McmConfig& cfg);
/// Missing keys keep the defaults of `base`.
McmConfig config_from_json(const nlohmann::json& j, McmConfig base = {});

struct TrainConfig {
    double learning_rate = 1e-4;
    int batch_size = 32;
    int max_epochs = 1000;
    int patience = 30;
    int min_masks = 1;
    int max_masks = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

} // namespace palettekit::mcm
