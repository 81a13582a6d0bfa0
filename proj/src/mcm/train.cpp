#include "palettekit/mcm/train.hpp"

#include "palettekit/error.hpp"
#include "palettekit/mcm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace palettekit::mcm {

namespace {

enum Stream : std::uint64_t { kInit = 1, kShuffle, kMaskCount, kMaskPick, kDropout, kValidation };

int draw_mask_count(const TrainConfig& tcfg, std::size_t n_colors, Rng& rng) {
    const int hi = std::min<int>(tcfg.max_masks, static_cast<int>(n_colors));
    const int lo = std::min(tcfg.min_masks, hi);
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

TrainingExample make_example(const PaletteExample& ex, int seq_len, int n_mask, std::uint64_t seed) {
    auto masked = apply_masking(tokenize_palette(ex.palette, static_cast<std::size_t>(seq_len)), n_mask, seed);
    return {std::move(masked.tokens), std::move(masked.targets), ex.condition};
}

} // namespace

Adam::Adam(const McmParams<float>& shape, double learning_rate)
    : lr_(learning_rate), m_(shape.zeros_like()), v_(shape.zeros_like()) {}

void Adam::step(McmParams<float>& params, const McmParams<float>& grads) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++step_;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step_));
    const float step_size = static_cast<float>(lr_ / c1);
    const float inv_sqrt_c2 = static_cast<float>(1.0 / std::sqrt(c2));

    auto p = params.tensors();
    auto g = grads.tensors();
    auto m = m_.tensors();
    auto v = v_.tensors();
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto mi = m[i].second->array();
        auto vi = v[i].second->array();
        const auto gi = g[i].second->array();
        mi = float(beta1) * mi + float(1.0 - beta1) * gi;
        vi = float(beta2) * vi + float(1.0 - beta2) * gi.square();
        p[i].second->array() -= step_size * mi / ((vi.sqrt() * inv_sqrt_c2) + float(eps));
    }
}

ValidationResult validate(const McmParams<float>& params, std::span<const PaletteExample> data,
                          const TrainConfig& tcfg, std::uint64_t seed) {
    if (data.empty()) fail(ErrorKind::EmptyDataset, "validation set is empty");
    const Model<float> model(params);
    double loss_sum = 0.0;
    std::size_t targets = 0;
    std::size_t hits = 0;
    std::vector<TrainingExample> batch;
    auto flush = [&] {
        if (batch.empty()) return;
        std::size_t n = 0;
        for (const auto& ex : batch) n += ex.targets.size();
        loss_sum += static_cast<double>(model.loss(batch)) * static_cast<double>(n);
        targets += n;
        batch.clear();
    };
    for (std::size_t i = 0; i < data.size(); ++i) {
        Rng count_rng(derive_seed(seed, kMaskCount, i));
        const int n_mask = draw_mask_count(tcfg, data[i].palette.size(), count_rng);
        auto ex = make_example(data[i], params.config.seq_len, n_mask, derive_seed(seed, kMaskPick, i));
        const auto predicted = predict_codes(params, ex.tokens, ex.condition);
        for (std::size_t t = 0; t < ex.targets.size(); ++t) hits += predicted[t] == ex.targets[t].code;
        batch.push_back(std::move(ex));
        if (static_cast<int>(batch.size()) == tcfg.batch_size) flush();
    }
    flush();
    return {loss_sum / static_cast<double>(targets), static_cast<double>(hits) / static_cast<double>(targets)};
}

TrainResult train(const McmConfig& cfg, const TrainConfig& tcfg, std::span<const PaletteExample> train_set,
                  std::span<const PaletteExample> val_set, const TrainHooks& hooks) {
    cfg.validate();
    tcfg.validate();
    if (train_set.empty()) fail(ErrorKind::EmptyDataset, "training set is empty");
    if (val_set.empty() && !hooks.validate) fail(ErrorKind::EmptyDataset, "validation set is empty");
    for (const auto& ex : train_set)
        if (cfg.conditioned() != (ex.condition != nullptr))
            fail(cfg.conditioned() ? ErrorKind::MissingCondition : ErrorKind::UnexpectedCondition,
                 "training example condition does not match the model variant");

    McmParams<float> params = init_params<float>(cfg, derive_seed(tcfg.seed, kInit));
    McmParams<float> best = params;
    McmParams<float> grads = params.zeros_like();
    Adam adam(params, tcfg.learning_rate);
    const Model<float> model(params);

    TrainHistory history;
    double best_loss = std::numeric_limits<double>::infinity();
    int since_best = 0;
    std::vector<std::size_t> order(train_set.size());
    std::vector<TrainingExample> batch;

    for (int epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        Rng shuffle_rng(derive_seed(tcfg.seed, kShuffle, epoch));
        shuffle_rng.shuffle(std::span(order));
        Rng count_rng(derive_seed(tcfg.seed, kMaskCount, epoch));
        Rng dropout_rng(derive_seed(tcfg.seed, kDropout, epoch));

        double loss_sum = 0.0;
        std::size_t steps = 0;
        for (std::size_t start = 0; start < order.size(); start += tcfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(tcfg.batch_size));
            batch.clear();
            for (std::size_t j = start; j < end; ++j) {
                const auto& ex = train_set[order[j]];
                const int n_mask = draw_mask_count(tcfg, ex.palette.size(), count_rng);
                batch.push_back(make_example(ex, cfg.seq_len, n_mask, derive_seed(tcfg.seed, kMaskPick, epoch, j)));
            }
            loss_sum += model.loss(batch, &grads, &dropout_rng);
            adam.step(params, grads);
            ++steps;
        }

        const ValidationResult vr = hooks.validate
                                        ? hooks.validate(epoch, params)
                                        : validate(params, val_set, tcfg, derive_seed(tcfg.seed, kValidation));
        history.train_loss.push_back(loss_sum / static_cast<double>(steps));
        history.val_loss.push_back(vr.loss);
        history.val_accuracy.push_back(vr.accuracy);

        if (vr.loss < best_loss) {
            best_loss = vr.loss;
            best = params;
            history.best_epoch = epoch;
            since_best = 0;
        } else {
            ++since_best;
        }
        if (hooks.on_epoch) hooks.on_epoch(epoch, history);
        if (since_best >= tcfg.patience) break;
    }
    return {std::move(best), std::move(history)};
}

} // namespace palettekit::mcm
