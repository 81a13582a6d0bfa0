#include "palettekit/mcm/config.hpp"

#include "palettekit/error.hpp"

#include <cmath>

namespace palettekit::mcm {

std::string_view to_string(Conditioning c) noexcept { return c == Conditioning::Cross ? "cross" : "none"; }

Conditioning conditioning_from_string(std::string_view s) {
    if (s == "none") return Conditioning::None;
    if (s == "cross") return Conditioning::Cross;
    fail(ErrorKind::InvalidConfig, "conditioning must be 'none' or 'cross', got '" + std::string(s) + "'");
}

void McmConfig::validate() const {
    auto bad = [](const std::string& what) { fail(ErrorKind::InvalidConfig, what); };
    if (d_model < 1) bad("d_model must be positive");
    if (n_heads < 1) bad("n_heads must be positive");
    if (d_model % n_heads != 0)
        bad("d_model " + std::to_string(d_model) + " is not divisible by n_heads " + std::to_string(n_heads));
    if (n_layers < 1) bad("n_layers must be positive");
    if (d_ff < 0) bad("d_ff must be non-negative");
    if (seq_len < 3) bad("seq_len must be at least 3");
    if (conditioned() != (cond_dim > 0)) bad("cond_dim must be positive exactly when conditioning is cross");
    if (!(dropout >= 0.0 && dropout < 1.0)) bad("dropout must lie in [0, 1)");
}

McmConfig make_config(const McmConfig& fields) {
    fields.validate();
    return fields;
}

nlohmann::json to_json(const McmConfig& cfg) {
    return {{"d_model", cfg.d_model},   {"n_layers", cfg.n_layers},
            {"n_heads", cfg.n_heads},   {"d_ff", cfg.d_ff},
            {"seq_len", cfg.seq_len},   {"vocab_size", McmConfig::kVocabSize},
            {"conditioning", std::string(to_string(cfg.conditioning))},
            {"cond_dim", cfg.cond_dim}, {"dropout", cfg.dropout}};
}

McmConfig config_from_json(const nlohmann::json& j, McmConfig base) {
    if (!j.is_object()) fail(ErrorKind::InvalidConfig, "model config must be a JSON object");
    try {
        if (j.contains("vocab_size") && j.at("vocab_size").get<int>() != McmConfig::kVocabSize)
            fail(ErrorKind::InvalidConfig, "vocab_size is fixed at 4100");
        base.d_model = j.value("d_model", base.d_model);
        base.n_layers = j.value("n_layers", base.n_layers);
        base.n_heads = j.value("n_heads", base.n_heads);
        base.d_ff = j.value("d_ff", base.d_ff);
        base.seq_len = j.value("seq_len", base.seq_len);
        if (j.contains("conditioning"))
            base.conditioning = conditioning_from_string(j.at("conditioning").get<std::string>());
        base.cond_dim = j.value("cond_dim", base.cond_dim);
        base.dropout = j.value("dropout", base.dropout);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidConfig, e.what());
    }
    base.validate();
    return base;
}

void TrainConfig::validate() const {
    auto bad = [](const std::string& what) { fail(ErrorKind::InvalidConfig, what); };
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) bad("learning rate must be positive");
    if (batch_size < 1) bad("batch size must be at least 1");
    if (max_epochs < 1) bad("max_epochs must be at least 1");
    if (patience < 1) bad("patience must be at least 1");
    if (min_masks < 1 || max_masks < min_masks) bad("mask range must satisfy 1 <= min_masks <= max_masks");
}

nlohmann::json to_json(const TrainConfig& cfg) {
    return {{"learning_rate", cfg.learning_rate}, {"batch_size", cfg.batch_size}, {"max_epochs", cfg.max_epochs},
            {"patience", cfg.patience},           {"min_masks", cfg.min_masks},   {"max_masks", cfg.max_masks},
            {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base) {
    if (!j.is_object()) fail(ErrorKind::InvalidConfig, "train config must be a JSON object");
    try {
        base.learning_rate = j.value("learning_rate", base.learning_rate);
        base.batch_size = j.value("batch_size", base.batch_size);
        base.max_epochs = j.value("max_epochs", base.max_epochs);
        base.patience = j.value("patience", base.patience);
        base.min_masks = j.value("min_masks", base.min_masks);
        base.max_masks = j.value("max_masks", base.max_masks);
        base.seed = j.value("seed", base.seed);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidConfig, e.what());
    }
    base.validate();
    return base;
}

} // namespace palettekit::mcm
