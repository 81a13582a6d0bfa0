#include "oracles.hpp"
#include "fixtures.hpp"
#include "support.hpp"

#include "palettekit/condition.hpp"
#include "palettekit/error.hpp"
#include "palettekit/mcm/checkpoint.hpp"
#include "palettekit/mcm/evaluate.hpp"
#include "palettekit/mcm/inference.hpp"
#include "palettekit/mcm/model.hpp"
#include "palettekit/mcm/train.hpp"
#include "palettekit/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

using namespace palettekit;
using namespace palettekit::mcm;
using testsupport::TempDir;
using testsupport::random_palette;
using testsupport::random_tokens;
using testsupport::scrambled;
using testsupport::tiny;

namespace {

ErrorKind error_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

std::size_t closed_form_count(const McmConfig& c) {
    const std::size_t d = c.d_model, v = 4100, f = c.ff_width(), s = c.seq_len, e = c.cond_dim;
    const std::size_t self = 2 * d + 4 * d * d + 4 * d;
    const std::size_t cross = c.conditioned() ? 2 * d + 2 * d * d + 2 * e * d + 4 * d : 0;
    const std::size_t ff = 2 * d + d * f + f + f * d + d;
    return v * d + s * d + c.n_layers * (self + cross + ff) + 2 * d + d * v + v;
}

} // namespace

TEST_CASE("config validation") {
    McmConfig bad;
    bad.d_model = 12;
    bad.n_heads = 5;
    CHECK(error_kind([&] { make_config(bad); }) == ErrorKind::InvalidConfig);
    McmConfig c;
    c.seq_len = 2;
    CHECK(error_kind([&] { make_config(c); }) == ErrorKind::InvalidConfig);
    c = {};
    c.conditioning = Conditioning::Cross;
    CHECK(error_kind([&] { make_config(c); }) == ErrorKind::InvalidConfig);
    c = {};
    c.cond_dim = 4;
    CHECK(error_kind([&] { make_config(c); }) == ErrorKind::InvalidConfig);
    c = {};
    c.dropout = 1.0;
    CHECK(error_kind([&] { make_config(c); }) == ErrorKind::InvalidConfig);
    const McmConfig defaults;
    CHECK(defaults.d_model == 768);
    CHECK(defaults.ff_width() == 4 * 768);
    CHECK(defaults.seq_len == 8);
    const TrainConfig t;
    CHECK(t.learning_rate == 1e-4);
    CHECK(t.batch_size == 32);
    CHECK(t.patience == 30);
    CHECK(config_from_json(to_json(tiny(true))) == tiny(true));
}

TEST_CASE("parameter count matches the shape arithmetic") {
    CHECK(allocate_params<float>(tiny(false)).parameter_count() == closed_form_count(tiny(false)));
    CHECK(allocate_params<float>(tiny(true)).parameter_count() == closed_form_count(tiny(true)));
    McmConfig c;
    c.d_model = 16;
    c.n_layers = 3;
    c.n_heads = 4;
    c.d_ff = 24;
    c.seq_len = 9;
    c.conditioning = Conditioning::Cross;
    c.cond_dim = 5;
    CHECK(allocate_params<double>(c).parameter_count() == closed_form_count(c));
    // d=8, 1 layer, d_ff=32, seq_len=5: 32800 + 40 + (16 + 256 + 32) + (16 + 256 + 32 + 256 + 8) + 16 + 32800 + 4100
    CHECK(closed_form_count(tiny(false)) == 70628);
}

TEST_CASE("initialization is deterministic and scaled") {
    const auto a = init_params<float>(tiny(true), 42);
    const auto b = init_params<float>(tiny(true), 42);
    const auto c = init_params<float>(tiny(true), 43);
    CHECK(bit_identical(a, b));
    CHECK(!bit_identical(a, c));
    CHECK(a.layers[0].self_attn.wq.cwiseAbs().maxCoeff() <= 1.0f / std::sqrt(8.0f));
    CHECK(a.layers[0].cross_attn.wk.cwiseAbs().maxCoeff() <= 1.0f / std::sqrt(16.0f));
    CHECK(a.layers[0].w2.cwiseAbs().maxCoeff() <= 1.0f / std::sqrt(32.0f));
    CHECK(a.layers[0].self_attn.norm_gain.isOnes());
    CHECK(a.layers[0].b1.isZero());
    CHECK(a.head_bias.isZero());
}

TEST_CASE("masking") {
    const Palette p{LabColor(10, 0, 0), LabColor(20, 0, 0), LabColor(30, 0, 0), LabColor(40, 0, 0),
                    LabColor(50, 0, 0)};
    const auto seq = tokenize_palette(p, 8);
    const auto none = apply_masking(seq, 0, 1);
    CHECK(none.tokens == seq);
    CHECK(none.targets.empty());

    const auto all = apply_masking(seq, 5, 1);
    for (int i = 1; i <= 5; ++i) CHECK(all.tokens[i] == Token::mask());
    CHECK(all.tokens[0] == Token::palette_start());
    CHECK(all.tokens[6] == Token::palette_end());
    CHECK(all.tokens[7] == Token::pad());
    REQUIRE(all.targets.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(all.targets[i] == MaskTarget{i + 1, quantize(p[i])});

    CHECK(error_kind([&] { apply_masking(seq, 6, 1); }) == ErrorKind::TooManyMasks);

    // positions are distinct color slots and roughly uniform
    std::array<int, 8> hits{};
    for (std::uint64_t s = 0; s < 5000; ++s) {
        const auto m = apply_masking(seq, 2, s);
        REQUIRE(m.targets.size() == 2);
        REQUIRE(m.targets[0].position < m.targets[1].position);
        for (const auto& t : m.targets) {
            REQUIRE((t.position >= 1 && t.position <= 5));
            ++hits[t.position];
        }
        CHECK(apply_masking(seq, 2, s).tokens == m.tokens);
    }
    for (int i = 1; i <= 5; ++i) CHECK(std::abs(hits[i] - 2000) < 200);
}

TEST_CASE("forward output shape and softmax normalization") {
    const auto params = scrambled<double>(tiny(false), 1);
    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto seq = random_tokens(rng, 5, true);
        const auto logits = forward(params, seq, nullptr);
        CHECK(logits.rows() == 5);
        CHECK(logits.cols() == 4100);
        const auto probs = softmax_rows<double>(logits);
        for (Eigen::Index r = 0; r < probs.rows(); ++r) CHECK(std::abs(probs.row(r).sum() - 1.0) <= 1e-6);
    }
    const auto fparams = params.cast<float>();
    const auto probs = softmax_rows<float>(forward(fparams, random_tokens(rng, 5, true), nullptr));
    for (Eigen::Index r = 0; r < probs.rows(); ++r) CHECK(std::abs(probs.row(r).sum() - 1.0f) <= 1e-6f);
}

TEST_CASE("forward agrees with the straight-line oracle") {
    for (bool conditioned : {false, true}) {
        for (int heads : {1, 2}) {
            const auto params = scrambled<double>(tiny(conditioned, heads), 10 + heads);
            Rng rng(99);
            for (int t = 0; t < 20; ++t) {
                const auto seq = random_tokens(rng, 5, t % 2 == 0);
                const auto cond = stub_condition_encoder("cond " + std::to_string(t), 1 + t % 4, 16);
                const ConditionEmbedding* c = conditioned ? &cond : nullptr;
                const auto got = forward(params, seq, c);
                const auto ref = oracle::forward_logits(params, seq, c);
                double worst = 0.0;
                for (std::size_t i = 0; i < ref.size(); ++i)
                    for (std::size_t j = 0; j < ref[i].size(); ++j)
                        worst = std::max(worst, std::abs(got(static_cast<Eigen::Index>(i), j) - ref[i][j]));
                CHECK(worst <= 1e-10);
            }
        }
    }
}

TEST_CASE("padding is invisible to real positions") {
    McmConfig cfg = tiny(false);
    cfg.seq_len = 8;
    const auto params = scrambled<double>(cfg, 3);
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const auto p = random_palette(rng, 1 + static_cast<int>(rng.below(4)));
        const auto short_seq = tokenize_palette(p, p.size() + 2);
        const auto long_seq = tokenize_palette(p, 8);
        const auto a = forward(params, short_seq, nullptr);
        const auto b = forward(params, long_seq, nullptr);
        CHECK((a - b.topRows(a.rows())).cwiseAbs().maxCoeff() <= 1e-5);
    }

    // values held in PAD slots do not leak
    auto changed = params;
    changed.token_embedding.row(Token::kPad).setConstant(3.0);
    changed.position_embedding.row(7).setConstant(-2.0);
    const auto seq = tokenize_palette(random_palette(rng, 3), 8);
    const auto a = forward(params, seq, nullptr);
    const auto b = forward(changed, seq, nullptr);
    CHECK((a.topRows(5) - b.topRows(5)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("conditioning inputs are checked and used") {
    const auto plain = scrambled<double>(tiny(false), 5);
    const auto cross = scrambled<double>(tiny(true), 5);
    Rng rng(6);
    const auto seq = random_tokens(rng, 5, true);
    const auto c1 = stub_condition_encoder("a red barn", 4, 16);
    const auto c2 = stub_condition_encoder("a blue lake", 4, 16);
    const auto wrong = stub_condition_encoder("x", 4, 7);
    CHECK(error_kind([&] { forward(plain, seq, &c1); }) == ErrorKind::UnexpectedCondition);
    CHECK(error_kind([&] { forward(cross, seq, nullptr); }) == ErrorKind::MissingCondition);
    CHECK(error_kind([&] { forward(cross, seq, &wrong); }) == ErrorKind::ShapeMismatch);
    CHECK((forward(cross, seq, &c1) - forward(cross, seq, &c2)).cwiseAbs().maxCoeff() > 1e-6);
    CHECK(error_kind([&] { forward(plain, TokenSequence(6, Token::pad()), nullptr); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("uniform logits give ln(4100)") {
    auto params = init_params<double>(tiny(false), 7);
    params.head.setZero();
    params.head_bias.setZero();
    Rng rng(8);
    std::vector<TrainingExample> batch;
    for (int i = 0; i < 4; ++i) {
        const auto m = apply_masking(tokenize_palette(random_palette(rng, 3), 5), 2, i);
        batch.push_back({m.tokens, m.targets, nullptr});
    }
    CHECK(std::abs(Model<double>(params).loss(batch) - std::log(4100.0)) <= 1e-6);
    CHECK(std::abs(Model<float>(params.cast<float>()).loss(batch) - std::log(4100.0f)) <= 1e-6);
    batch[1].targets.clear();
    CHECK(error_kind([&] { Model<double>(params).loss(batch); }) == ErrorKind::EmptyTargets);
}

TEST_CASE("loss matches the oracle cross-entropy") {
    const auto params = scrambled<double>(tiny(true), 12);
    Rng rng(13);
    const auto m = apply_masking(tokenize_palette(random_palette(rng, 3), 5), 2, 5);
    const auto cond = stub_condition_encoder("ocean", 3, 16);
    const TrainingExample ex{m.tokens, m.targets, &cond};
    std::vector<std::pair<int, int>> targets;
    for (const auto& t : m.targets) targets.emplace_back(t.position, t.code.value());
    CHECK(std::abs(Model<double>(params).loss(std::span(&ex, 1)) -
                   oracle::masked_loss(params, m.tokens, targets, &cond)) <= 1e-10);
}

TEST_CASE("analytic gradients match central differences") {
    for (bool conditioned : {false, true}) {
        CAPTURE(conditioned);
        const auto cfg = tiny(conditioned);
        const auto params = scrambled<double>(cfg, conditioned ? 21 : 20);
        Rng rng(22);
        std::vector<ConditionEmbedding> conds;
        for (int i = 0; i < 3; ++i) conds.push_back(stub_condition_encoder("caption " + std::to_string(i), 4, 16));
        const auto batch = testsupport::gradient_batch(rng, conditioned ? &conds : nullptr);
        const auto r = testsupport::finite_difference_check(params, batch);
        MESSAGE("checked " << r.checked << " entries, worst relative error " << r.worst);
        CHECK(r.checked == params.parameter_count());
        CHECK_MESSAGE(r.failed == 0, r.first_failure);
    }
}

TEST_CASE("dropout is seeded and only active in training") {
    McmConfig cfg = tiny(false);
    cfg.dropout = 0.3;
    const auto params = scrambled<double>(make_config(cfg), 30);
    Rng rng(31);
    const auto m = apply_masking(tokenize_palette(random_palette(rng, 3), 5), 2, 1);
    const TrainingExample ex{m.tokens, m.targets, nullptr};
    const Model<double> model(params);
    Rng r1(5), r2(5), r3(6);
    const double a = model.loss(std::span(&ex, 1), nullptr, &r1);
    const double b = model.loss(std::span(&ex, 1), nullptr, &r2);
    const double c = model.loss(std::span(&ex, 1), nullptr, &r3);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(model.loss(std::span(&ex, 1)) == model.loss(std::span(&ex, 1)));
}

TEST_CASE("a single example can be memorized") {
    McmConfig cfg;
    cfg.d_model = 32;
    cfg.n_layers = 1;
    cfg.n_heads = 4;
    cfg.seq_len = 8;
    auto params = init_params<float>(make_config(cfg), 1);
    const Palette p{LabColor(80, 10, 10), LabColor(60, -30, 40), LabColor(30, 50, -20), LabColor(50, 0, 0),
                    LabColor(20, 5, 5)};
    const auto m = apply_masking(tokenize_palette(p, 8), 2, 3);
    const TrainingExample ex{m.tokens, m.targets, nullptr};
    Adam adam(params, 1e-2);
    auto grads = params.zeros_like();
    double first = 0, last = 0;
    for (int step = 0; step < 50; ++step) {
        last = Model<float>(params).loss(std::span(&ex, 1), &grads);
        if (step == 0) first = last;
        adam.step(params, grads);
    }
    last = Model<float>(params).loss(std::span(&ex, 1));
    CHECK(first > 8.0);
    CHECK(last < 0.01);

    // greedy prediction recovers the memorized codes
    MaskedPalette masked(p.begin(), p.end());
    for (const auto& t : m.targets) masked[t.position - 1].reset();
    const auto filled = predict_masked(params, masked, nullptr);
    REQUIRE(filled.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (masked[i])
            CHECK(filled[i] == p[i]);
        else
            CHECK(filled[i] == dequantize(quantize(p[i])));
    }
}

TEST_CASE("adam step matches the closed form on the first update") {
    McmConfig cfg = tiny(false);
    auto params = init_params<float>(cfg, 2);
    const auto before = params;
    auto grads = params.zeros_like();
    grads.head(0, 0) = 0.5f;
    grads.head(1, 0) = -2.0f;
    Adam adam(params, 1e-3);
    adam.step(params, grads);
    // first step: m_hat = g, v_hat = g^2, update = lr * g / (|g| + eps)
    CHECK(params.head(0, 0) == doctest::Approx(before.head(0, 0) - 1e-3 * 0.5 / (0.5 + 1e-8)).epsilon(1e-6));
    CHECK(params.head(1, 0) == doctest::Approx(before.head(1, 0) + 1e-3).epsilon(1e-6));
    CHECK(params.head(2, 0) == before.head(2, 0));
}

TEST_CASE("prediction and embedding contracts") {
    const auto params = init_params<float>(make_config([] {
        McmConfig c;
        c.d_model = 16;
        c.n_layers = 1;
        c.n_heads = 2;
        return c;
    }()), 4);
    const MaskedPalette full{LabColor(10, 1, 1), LabColor(20, 2, 2)};
    CHECK(error_kind([&] { predict_masked(params, full, nullptr); }) == ErrorKind::NoMaskedSlots);
    const MaskedPalette some{LabColor(10, 1, 1), std::nullopt, LabColor(70, -20, 2)};
    const auto out = predict_masked(params, some, nullptr);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == *some[0]);
    CHECK(out[2] == *some[2]);

    const Palette p{LabColor(10, 1, 1), LabColor(20, 2, 2), LabColor(30, 3, 3)};
    const auto e1 = embed_palette(params, p, nullptr);
    const auto e2 = embed_palette(params, p, nullptr);
    CHECK(e1.size() == 16);
    CHECK(e1 == e2);
    const auto e3 = embed_palette(params, Palette{LabColor(10, 1, 1), LabColor(20, 2, 2), LabColor(90, 3, 3)}, nullptr);
    CHECK(e1 != e3);
}

TEST_CASE("argmax ties go to the lowest code") {
    auto params = allocate_params<float>(tiny(false));
    // all logits equal except two tied maxima at codes 700 and 300
    params.head_bias(0, 700) = 1.0f;
    params.head_bias(0, 300) = 1.0f;
    const auto codes = predict_codes(params, {Token::palette_start(), Token::mask(), Token::palette_end()}, nullptr);
    REQUIRE(codes.size() == 1);
    CHECK(codes[0].value() == 300);
    // special tokens are never predicted even when they score highest
    params.head_bias(0, Token::kPad) = 5.0f;
    CHECK(predict_codes(params, {Token::palette_start(), Token::mask(), Token::palette_end()}, nullptr)[0].value() ==
          300);
}

TEST_CASE("early stopping halts after the patience window") {
    McmConfig cfg;
    cfg.d_model = 8;
    cfg.n_layers = 1;
    cfg.n_heads = 2;
    cfg = make_config(cfg);
    Rng rng(1);
    std::vector<PaletteExample> data;
    for (int i = 0; i < 6; ++i) data.push_back({random_palette(rng, 5), nullptr});

    for (int patience : {2, 5}) {
        TrainConfig tcfg;
        tcfg.batch_size = 4;
        tcfg.max_epochs = 100;
        tcfg.patience = patience;
        McmParams<float> at_best;
        TrainHooks hooks;
        hooks.validate = [&](int epoch, const McmParams<float>& p) {
            if (epoch == 3) at_best = p;
            return ValidationResult{epoch <= 3 ? 10.0 - epoch : 7.0, 0.0};
        };
        const auto result = train(cfg, tcfg, data, data, hooks);
        CHECK(result.history.epochs() == 3 + patience);
        CHECK(result.history.best_epoch == 3);
        CHECK(result.history.val_loss.size() == static_cast<std::size_t>(3 + patience));
        CHECK(bit_identical(result.params, at_best));
    }

    TrainConfig capped;
    capped.max_epochs = 4;
    capped.batch_size = 4;
    const auto r = train(cfg, capped, data, data);
    CHECK(r.history.epochs() == 4);
    CHECK(r.history.best_epoch >= 1);
    CHECK(error_kind([&] { train(cfg, capped, {}, data); }) == ErrorKind::EmptyDataset);
}

TEST_CASE("training is deterministic") {
    McmConfig cfg;
    cfg.d_model = 16;
    cfg.n_layers = 2;
    cfg.n_heads = 2;
    cfg.dropout = 0.1;
    cfg = make_config(cfg);
    Rng rng(3);
    std::vector<PaletteExample> data;
    for (int i = 0; i < 20; ++i) data.push_back({random_palette(rng, 5), nullptr});
    TrainConfig tcfg;
    tcfg.max_epochs = 3;
    tcfg.batch_size = 8;
    tcfg.seed = 11;
    const auto a = train(cfg, tcfg, data, data);
    const auto b = train(cfg, tcfg, data, data);
    CHECK(a.history == b.history);
    CHECK(bit_identical(a.params, b.params));
    tcfg.seed = 12;
    CHECK(!(train(cfg, tcfg, data, data).history == a.history));
}

TEST_CASE("checkpoint round trip and corruption") {
    TempDir dir("ckpt");
    const auto params = init_params<float>(tiny(true), 9);
    save_checkpoint(params, dir / "m.mcm");
    const auto loaded = load_checkpoint(dir / "m.mcm");
    CHECK(bit_identical(params, loaded));
    CHECK(loaded.config == params.config);

    const auto bytes = encode_checkpoint(params);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "MCM1");
    CHECK(error_kind([&] { decode_checkpoint(std::span(bytes).first(bytes.size() - 3)); }) == ErrorKind::Format);
    CHECK(error_kind([&] { decode_checkpoint(std::span(bytes).first(6)); }) == ErrorKind::Format);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK(error_kind([&] { decode_checkpoint(bad); }) == ErrorKind::Format);
    CHECK(error_kind([&] { load_checkpoint(dir / "absent.mcm"); }) == ErrorKind::Io);

    // bump the header version
    std::string text(bytes.begin(), bytes.end());
    const auto at = text.find("\"version\":1");
    REQUIRE(at != std::string::npos);
    text[at + 10] = '7';
    const std::vector<std::uint8_t> bumped(text.begin(), text.end());
    CHECK(error_kind([&] { decode_checkpoint(bumped); }) == ErrorKind::Version);
}

TEST_CASE("stub encoder and PTEB files") {
    const auto a = stub_condition_encoder("a quiet lake", 4, 32);
    const auto b = stub_condition_encoder("a quiet lake", 4, 32);
    const auto c = stub_condition_encoder("a noisy lake", 4, 32);
    CHECK(a.rows() == 4);
    CHECK(a.cols() == 32);
    CHECK(a == b);
    CHECK(!(a == c));
    for (float v : a.values()) CHECK((v >= -1.0f && v <= 1.0f));

    const auto bytes = encode_pteb(a);
    CHECK(bytes.size() == 4 + 1 + 8 + 4 * 128);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "PTEB");
    CHECK(bytes[4] == 1);
    CHECK(decode_pteb(bytes) == a);
    auto v2 = bytes;
    v2[4] = 2;
    CHECK(error_kind([&] { decode_pteb(v2); }) == ErrorKind::Version);
    auto bad = bytes;
    bad[1] = 'X';
    CHECK(error_kind([&] { decode_pteb(bad); }) == ErrorKind::Format);
    CHECK(error_kind([&] { decode_pteb(std::span(bytes).first(20)); }) == ErrorKind::Format);

    TempDir dir("pteb");
    write_pteb(dir / "a.pteb", a);
    CHECK(read_pteb(dir / "a.pteb") == a);
}

TEST_CASE("evaluation grid on untrained and perfect predictors") {
    Rng rng(77);
    std::vector<PaletteExample> data;
    for (int i = 0; i < 700; ++i) data.push_back({random_palette(rng, 5), nullptr});
    const std::vector<std::uint64_t> seeds{0};

    McmConfig cfg;
    cfg.d_model = 16;
    cfg.n_layers = 1;
    cfg.n_heads = 2;
    const auto params = init_params<float>(make_config(cfg), 5);
    const auto rows = evaluate_grid(params, data, seeds);
    REQUIRE(rows.size() == 5);
    std::size_t positions = 0;
    double hits = 0;
    for (const auto& r : rows) {
        positions += r.positions;
        hits += r.accuracy * static_cast<double>(r.positions);
    }
    CHECK(positions == 700 * 15);
    // Binomial(10500, 1/4096): 99% of runs see at most 8 hits.
    CHECK(hits <= 8.5);

    // A perfect predictor looks the answers up by example and mask count; each
    // example carries its own condition so the predictor can tell them apart.
    std::vector<ConditionEmbedding> tags(data.size(), ConditionEmbedding(1, 1, {0.0f}));
    std::vector<PaletteExample> tagged = data;
    std::map<std::pair<const ConditionEmbedding*, int>, std::vector<ColorCode>> truth;
    for (std::size_t i = 0; i < data.size(); ++i) {
        tagged[i].condition = &tags[i];
        for (int n = 1; n <= 5; ++n) {
            const auto m = apply_masking(tokenize_palette(data[i].palette, 8), n, derive_seed(0, n, i));
            std::vector<ColorCode> codes;
            for (const auto& t : m.targets) codes.push_back(t.code);
            truth[{&tags[i], n}] = codes;
        }
    }
    const Predictor perfect = [&](const TokenSequence& masked, const ConditionEmbedding* cond) {
        const int n = static_cast<int>(std::count(masked.begin(), masked.end(), Token::mask()));
        return truth.at({cond, n});
    };
    const auto best = evaluate_grid(perfect, tagged, seeds, 8);
    for (const auto& r : best) {
        CAPTURE(r.n_mask);
        CHECK(r.accuracy == 1.0);
        // the remaining DCCW is the quantization floor
        double floor = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto m = apply_masking(tokenize_palette(data[i].palette, 8), r.n_mask, derive_seed(0, r.n_mask, i));
            std::vector<LabColor> colors(data[i].palette.begin(), data[i].palette.end());
            for (const auto& t : m.targets) colors[t.position - 1] = dequantize(t.code);
            floor += dccw(Palette(colors), data[i].palette);
        }
        CHECK(r.dccw == doctest::Approx(floor / static_cast<double>(data.size())).epsilon(1e-12));
    }

    CHECK(evaluate_grid(params, data, seeds) == rows);
    CHECK(error_kind([&] { evaluate_grid(params, {}, seeds); }) == ErrorKind::EmptyDataset);
}
