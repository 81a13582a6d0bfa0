#pragma once

#include "palettekit/mcm/config.hpp"
#include "palettekit/mcm/model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace palettekit::mcm {

/// One palette plus its optional condition. The condition is borrowed and
/// must outlive training / evaluation.
struct PaletteExample {
    Palette palette;
    const ConditionEmbedding* condition = nullptr;
};

struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> val_accuracy;
    int best_epoch = 0; // 1-based; 0 before the first epoch

    int epochs() const noexcept { return static_cast<int>(train_loss.size()); }

    friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

struct ValidationResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

struct TrainHooks {
    /// Replaces the built-in validation pass. Receives the 1-based epoch and
    /// the parameters at the end of that epoch.
    std::function<ValidationResult(int epoch, const McmParams<float>&)> validate;
    /// Called after every epoch has been scored.
    std::function<void(int epoch, const TrainHistory&)> on_epoch;
};

struct TrainResult {
    McmParams<float> params; // from the best-validation-loss epoch
    TrainHistory history;
};

/// Adam (0.9, 0.999, 1e-8) on masked-token cross-entropy. Each epoch draws a
/// fresh shuffle and fresh per-example masks (count uniform over
/// [min_masks, max_masks], capped by the palette size) from tcfg.seed.
/// Validation masks are fixed across epochs. Training stops once the
/// validation loss has not improved for `patience` epochs.
TrainResult train(const McmConfig& cfg, const TrainConfig& tcfg, std::span<const PaletteExample> train_set,
                  std::span<const PaletteExample> val_set, const TrainHooks& hooks = {});

/// Built-in validation: mean masked-token loss and accuracy@1 with masks
/// drawn from `seed`.
ValidationResult validate(const McmParams<float>& params, std::span<const PaletteExample> data,
                          const TrainConfig& tcfg, std::uint64_t seed);

/// Single Adam update; exposed for tests.
class Adam {
public:
    Adam(const McmParams<float>& shape, double learning_rate);
    void step(McmParams<float>& params, const McmParams<float>& grads);

private:
    double lr_;
    long step_ = 0;
    McmParams<float> m_;
    McmParams<float> v_;
};

} // namespace palettekit::mcm
