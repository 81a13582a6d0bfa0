#include "palettekit/mcm/model.hpp"

#include "palettekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace palettekit::mcm {

namespace {

constexpr double kNormEpsilon = 1e-5;

// ---------------------------------------------------------------------------
// Parameter allocation

template <typename T>
Mat<T> zeros(Eigen::Index rows, Eigen::Index cols) {
    return Mat<T>::Zero(rows, cols);
}

template <typename T>
AttentionParams<T> allocate_attention(int d, int kv_in) {
    AttentionParams<T> a;
    a.norm_gain = Mat<T>::Ones(1, d);
    a.norm_bias = zeros<T>(1, d);
    a.wq = zeros<T>(d, d);
    a.wk = zeros<T>(kv_in, d);
    a.wv = zeros<T>(kv_in, d);
    a.wo = zeros<T>(d, d);
    a.bq = zeros<T>(1, d);
    a.bk = zeros<T>(1, d);
    a.bv = zeros<T>(1, d);
    a.bo = zeros<T>(1, d);
    return a;
}

bool is_linear_weight(const std::string& name) {
    const auto last = name.substr(name.rfind('.') + 1);
    return last == "wq" || last == "wk" || last == "wv" || last == "wo" || last == "w1" || last == "w2" ||
           last == "weight";
}

} // namespace

template <typename T>
McmParams<T> allocate_params(const McmConfig& cfg) {
    cfg.validate();
    const int d = cfg.d_model;
    const int v = McmConfig::kVocabSize;
    McmParams<T> p;
    p.config = cfg;
    p.token_embedding = zeros<T>(v, d);
    p.position_embedding = zeros<T>(cfg.seq_len, d);
    p.layers.resize(cfg.n_layers);
    for (auto& layer : p.layers) {
        layer.self_attn = allocate_attention<T>(d, d);
        if (cfg.conditioned()) layer.cross_attn = allocate_attention<T>(d, cfg.cond_dim);
        layer.ff_norm_gain = Mat<T>::Ones(1, d);
        layer.ff_norm_bias = zeros<T>(1, d);
        layer.w1 = zeros<T>(d, cfg.ff_width());
        layer.b1 = zeros<T>(1, cfg.ff_width());
        layer.w2 = zeros<T>(cfg.ff_width(), d);
        layer.b2 = zeros<T>(1, d);
    }
    p.final_norm_gain = Mat<T>::Ones(1, d);
    p.final_norm_bias = zeros<T>(1, d);
    p.head = zeros<T>(d, v);
    p.head_bias = zeros<T>(1, v);
    return p;
}

template <typename T>
McmParams<T> init_params(const McmConfig& cfg, std::uint64_t seed) {
    McmParams<T> p = allocate_params<T>(cfg);
    Rng rng(seed);
    const double emb_scale = 1.0 / std::sqrt(static_cast<double>(cfg.d_model));
    auto normal_fill = [&](Mat<T>& m, double scale) {
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(scale * rng.normal());
    };
    auto linear_fill = [&](Mat<T>& m) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(m.rows()));
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(rng.uniform(-bound, bound));
    };
    for (auto& [name, m] : p.tensors()) {
        if (name == "token_embedding" || name == "position_embedding")
            normal_fill(*m, emb_scale);
        else if (is_linear_weight(name))
            linear_fill(*m);
    }
    return p;
}

template McmParams<float> allocate_params<float>(const McmConfig&);
template McmParams<double> allocate_params<double>(const McmConfig&);
template McmParams<long double> allocate_params<long double>(const McmConfig&);
template McmParams<float> init_params<float>(const McmConfig&, std::uint64_t);
template McmParams<double> init_params<double>(const McmConfig&, std::uint64_t);

// ---------------------------------------------------------------------------

MaskedSequence apply_masking(const TokenSequence& tokens, int n_mask, std::uint64_t seed) {
    std::vector<int> color_positions;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i].is_color()) color_positions.push_back(static_cast<int>(i));
    if (n_mask < 0) fail(ErrorKind::InvalidArgument, "mask count must be non-negative");
    if (static_cast<std::size_t>(n_mask) > color_positions.size())
        fail(ErrorKind::TooManyMasks, "cannot mask " + std::to_string(n_mask) + " of " +
                                          std::to_string(color_positions.size()) + " colors");

    Rng rng(seed);
    // Partial Fisher-Yates: the first n_mask entries form the sample.
    for (int i = 0; i < n_mask; ++i) {
        const auto j = i + static_cast<int>(rng.below(color_positions.size() - i));
        std::swap(color_positions[i], color_positions[j]);
    }
    std::sort(color_positions.begin(), color_positions.begin() + n_mask);

    MaskedSequence out{tokens, {}};
    for (int i = 0; i < n_mask; ++i) {
        const int pos = color_positions[i];
        out.targets.push_back({pos, tokens[pos].code()});
        out.tokens[pos] = Token::mask();
    }
    return out;
}

template <typename T>
Mat<T> softmax_rows(const Mat<T>& logits) {
    Mat<T> out(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const T mx = logits.row(r).maxCoeff();
        out.row(r) = (logits.row(r).array() - mx).exp();
        out.row(r) /= out.row(r).sum();
    }
    return out;
}

template Mat<float> softmax_rows<float>(const Mat<float>&);
template Mat<double> softmax_rows<double>(const Mat<double>&);
template Mat<long double> softmax_rows<long double>(const Mat<long double>&);

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

template <typename T>
struct NormCache {
    Mat<T> xhat;
    Eigen::Matrix<T, Eigen::Dynamic, 1> rstd;
};

template <typename T>
Mat<T> layer_norm(const Mat<T>& x, const Mat<T>& gain, const Mat<T>& bias, NormCache<T>* cache) {
    const auto d = x.cols();
    Mat<T> xhat(x.rows(), d);
    Eigen::Matrix<T, Eigen::Dynamic, 1> rstd(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const T mean = x.row(r).mean();
        const auto centered = (x.row(r).array() - mean).eval();
        const T var = centered.square().sum() / static_cast<T>(d);
        rstd(r) = T(1) / std::sqrt(var + static_cast<T>(kNormEpsilon));
        xhat.row(r) = centered * rstd(r);
    }
    Mat<T> y = (xhat.array().rowwise() * gain.row(0).array()).rowwise() + bias.row(0).array();
    if (cache) {
        cache->xhat = std::move(xhat);
        cache->rstd = std::move(rstd);
    }
    return y;
}

template <typename T>
Mat<T> layer_norm_backward(const Mat<T>& dy, const Mat<T>& gain, const NormCache<T>& cache, Mat<T>& dgain,
                           Mat<T>& dbias) {
    dgain += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
    dbias += dy.colwise().sum();
    const Mat<T> dxhat = dy.array().rowwise() * gain.row(0).array();
    const T inv_d = T(1) / static_cast<T>(dy.cols());
    Mat<T> dx(dy.rows(), dy.cols());
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
        const T mean_d = dxhat.row(r).sum() * inv_d;
        const T mean_dx = dxhat.row(r).dot(cache.xhat.row(r)) * inv_d;
        dx.row(r) = cache.rstd(r) * (dxhat.row(r).array() - mean_d - cache.xhat.row(r).array() * mean_dx).matrix();
    }
    return dx;
}

template <typename T>
T gelu(T x) {
    return T(0.5) * x * (T(1) + std::erf(x / std::sqrt(T(2))));
}

template <typename T>
T gelu_grad(T x) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    const T cdf = T(0.5) * (T(1) + std::erf(x / std::sqrt(T(2))));
    return cdf + x * static_cast<T>(inv_sqrt_2pi) * std::exp(T(-0.5) * x * x);
}

template <typename T>
void add_row(Mat<T>& m, const Mat<T>& bias) {
    m.rowwise() += bias.row(0);
}

template <typename T>
Mat<T> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng* rng) {
    if (!rng || p <= 0.0) return {};
    Mat<T> mask(rows, cols);
    const T keep = static_cast<T>(1.0 / (1.0 - p));
    for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng->uniform() < p ? T(0) : keep;
    return mask;
}

template <typename T>
struct AttentionCache {
    NormCache<T> norm;
    Mat<T> normed;          // queries' source
    Mat<T> q, k, v;         // k, v rows follow kv_offsets
    std::vector<Mat<T>> p;  // (example, head) attention probabilities
    Mat<T> context;
    Mat<T> drop;
};

template <typename T>
struct LayerCache {
    AttentionCache<T> self_attn;
    AttentionCache<T> cross_attn;
    NormCache<T> ff_norm;
    Mat<T> ff_in, ff_pre, ff_act, ff_drop;
};

template <typename T>
struct ForwardState {
    int batch = 0;
    int n = 0; // tokens per sequence
    std::vector<int> token_ids;        // batch * n
    std::vector<std::uint8_t> key_ok;  // batch * n, false on PAD
    Mat<T> cond_rows;                  // stacked condition rows
    std::vector<Eigen::Index> cond_offsets; // batch + 1
    std::vector<LayerCache<T>> layers;
    NormCache<T> final_norm;
    Mat<T> out; // final-norm output, (batch * n) x d
};

template <typename T>
class Engine {
public:
    Engine(const McmParams<T>& p, Rng* dropout_rng) : p_(p), cfg_(p.config), rng_(dropout_rng) {}

    void prepare(std::span<const TokenSequence* const> seqs, std::span<const ConditionEmbedding* const> conds,
                 ForwardState<T>& s) const {
        if (seqs.empty()) fail(ErrorKind::EmptyDataset, "empty batch");
        s.batch = static_cast<int>(seqs.size());
        s.n = static_cast<int>(seqs[0]->size());
        if (s.n < 1 || s.n > cfg_.seq_len)
            fail(ErrorKind::ShapeMismatch, "sequence length " + std::to_string(s.n) + " outside [1, " +
                                               std::to_string(cfg_.seq_len) + "]");
        s.token_ids.resize(static_cast<std::size_t>(s.batch) * s.n);
        s.key_ok.resize(s.token_ids.size());
        for (int e = 0; e < s.batch; ++e) {
            if (static_cast<int>(seqs[e]->size()) != s.n)
                fail(ErrorKind::ShapeMismatch, "sequences in a batch must share one length");
            bool any = false;
            for (int i = 0; i < s.n; ++i) {
                const int id = (*seqs[e])[i].index();
                s.token_ids[e * s.n + i] = id;
                s.key_ok[e * s.n + i] = id != Token::kPad;
                any |= id != Token::kPad;
            }
            if (!any) fail(ErrorKind::MalformedSequence, "sequence holds only PAD tokens");
        }

        s.cond_offsets.assign(1, 0);
        if (cfg_.conditioned()) {
            Eigen::Index total = 0;
            for (int e = 0; e < s.batch; ++e) {
                const auto* c = conds[e];
                if (!c) fail(ErrorKind::MissingCondition, "conditioned model needs a condition embedding");
                if (c->cols() != cfg_.cond_dim)
                    fail(ErrorKind::ShapeMismatch, "condition width " + std::to_string(c->cols()) +
                                                       " differs from cond_dim " + std::to_string(cfg_.cond_dim));
                total += c->rows();
                s.cond_offsets.push_back(total);
            }
            s.cond_rows.resize(total, cfg_.cond_dim);
            for (int e = 0; e < s.batch; ++e)
                for (int r = 0; r < conds[e]->rows(); ++r)
                    for (int c = 0; c < cfg_.cond_dim; ++c)
                        s.cond_rows(s.cond_offsets[e] + r, c) = static_cast<T>(conds[e]->at(r, c));
        } else {
            for (int e = 0; e < s.batch; ++e)
                if (conds[e]) fail(ErrorKind::UnexpectedCondition, "unconditioned model received a condition");
        }
    }

    void forward(ForwardState<T>& s) const {
        const int d = cfg_.d_model;
        const Eigen::Index rows = static_cast<Eigen::Index>(s.batch) * s.n;
        Mat<T> h(rows, d);
        for (int e = 0; e < s.batch; ++e)
            for (int i = 0; i < s.n; ++i)
                h.row(e * s.n + i) = p_.token_embedding.row(s.token_ids[e * s.n + i]) + p_.position_embedding.row(i);

        s.layers.resize(cfg_.n_layers);
        for (int l = 0; l < cfg_.n_layers; ++l) {
            const auto& lp = p_.layers[l];
            auto& lc = s.layers[l];

            h += attention_forward(lp.self_attn, h, false, s, lc.self_attn);
            if (cfg_.conditioned()) h += attention_forward(lp.cross_attn, h, true, s, lc.cross_attn);

            lc.ff_in = layer_norm(h, lp.ff_norm_gain, lp.ff_norm_bias, &lc.ff_norm);
            lc.ff_pre = lc.ff_in * lp.w1;
            add_row(lc.ff_pre, lp.b1);
            lc.ff_act = lc.ff_pre.unaryExpr([](T x) { return gelu(x); });
            Mat<T> ff_out = lc.ff_act * lp.w2;
            add_row(ff_out, lp.b2);
            lc.ff_drop = dropout_mask<T>(ff_out.rows(), ff_out.cols(), cfg_.dropout, rng_);
            if (lc.ff_drop.size()) ff_out.array() *= lc.ff_drop.array();
            h += ff_out;
        }
        s.out = layer_norm(h, p_.final_norm_gain, p_.final_norm_bias, &s.final_norm);
    }

    // d_out: gradient w.r.t. the final-norm output.
    void backward(const ForwardState<T>& s, const Mat<T>& d_out, McmParams<T>& g) const {
        Mat<T> dh = layer_norm_backward(d_out, p_.final_norm_gain, s.final_norm, g.final_norm_gain, g.final_norm_bias);

        for (int l = cfg_.n_layers - 1; l >= 0; --l) {
            const auto& lp = p_.layers[l];
            const auto& lc = s.layers[l];
            auto& lg = g.layers[l];

            Mat<T> d_ff_out = dh;
            if (lc.ff_drop.size()) d_ff_out.array() *= lc.ff_drop.array();
            lg.w2 += lc.ff_act.transpose() * d_ff_out;
            lg.b2 += d_ff_out.colwise().sum();
            Mat<T> d_act = d_ff_out * lp.w2.transpose();
            Mat<T> d_pre = d_act.array() * lc.ff_pre.unaryExpr([](T x) { return gelu_grad(x); }).array();
            lg.w1 += lc.ff_in.transpose() * d_pre;
            lg.b1 += d_pre.colwise().sum();
            Mat<T> d_in = d_pre * lp.w1.transpose();
            dh += layer_norm_backward(d_in, lp.ff_norm_gain, lc.ff_norm, lg.ff_norm_gain, lg.ff_norm_bias);

            if (cfg_.conditioned()) dh += attention_backward(lp.cross_attn, lg.cross_attn, dh, true, s, lc.cross_attn);
            dh += attention_backward(lp.self_attn, lg.self_attn, dh, false, s, lc.self_attn);
        }

        for (int e = 0; e < s.batch; ++e)
            for (int i = 0; i < s.n; ++i) {
                const auto r = static_cast<Eigen::Index>(e) * s.n + i;
                g.token_embedding.row(s.token_ids[r]) += dh.row(r);
                g.position_embedding.row(i) += dh.row(r);
            }
    }

private:
    Mat<T> attention_forward(const AttentionParams<T>& ap, const Mat<T>& h, bool cross, const ForwardState<T>& s,
                             AttentionCache<T>& c) const {
        const int heads = cfg_.n_heads;
        const int dh = cfg_.head_dim();
        const T scale = T(1) / std::sqrt(static_cast<T>(dh));

        c.normed = layer_norm(h, ap.norm_gain, ap.norm_bias, &c.norm);
        c.q = c.normed * ap.wq;
        add_row(c.q, ap.bq);
        const Mat<T>& kv_src = cross ? s.cond_rows : c.normed;
        c.k = kv_src * ap.wk;
        add_row(c.k, ap.bk);
        c.v = kv_src * ap.wv;
        add_row(c.v, ap.bv);

        c.context.resize(c.q.rows(), c.q.cols());
        c.p.assign(static_cast<std::size_t>(s.batch) * heads, Mat<T>());
        for (int e = 0; e < s.batch; ++e) {
            const Eigen::Index q0 = static_cast<Eigen::Index>(e) * s.n;
            const Eigen::Index k0 = cross ? s.cond_offsets[e] : q0;
            const Eigen::Index nk = cross ? s.cond_offsets[e + 1] - s.cond_offsets[e] : s.n;
            for (int hd = 0; hd < heads; ++hd) {
                const auto qh = c.q.block(q0, hd * dh, s.n, dh);
                const auto kh = c.k.block(k0, hd * dh, nk, dh);
                const auto vh = c.v.block(k0, hd * dh, nk, dh);
                Mat<T> scores = (qh * kh.transpose()) * scale;
                if (!cross)
                    for (Eigen::Index j = 0; j < nk; ++j)
                        if (!s.key_ok[q0 + j]) scores.col(j).setConstant(-std::numeric_limits<T>::infinity());
                Mat<T> probs = softmax_rows<T>(scores);
                c.context.block(q0, hd * dh, s.n, dh) = probs * vh;
                c.p[static_cast<std::size_t>(e) * heads + hd] = std::move(probs);
            }
        }
        Mat<T> out = c.context * ap.wo;
        add_row(out, ap.bo);
        c.drop = dropout_mask<T>(out.rows(), out.cols(), cfg_.dropout, rng_);
        if (c.drop.size()) out.array() *= c.drop.array();
        return out;
    }

    // Returns the gradient w.r.t. the residual stream entering the block
    // (through the pre-norm); the identity path is handled by the caller.
    Mat<T> attention_backward(const AttentionParams<T>& ap, AttentionParams<T>& ag, const Mat<T>& d_res, bool cross,
                              const ForwardState<T>& s, const AttentionCache<T>& c) const {
        const int heads = cfg_.n_heads;
        const int dh = cfg_.head_dim();
        const T scale = T(1) / std::sqrt(static_cast<T>(dh));

        Mat<T> d_out = d_res;
        if (c.drop.size()) d_out.array() *= c.drop.array();
        ag.wo += c.context.transpose() * d_out;
        ag.bo += d_out.colwise().sum();
        const Mat<T> d_ctx = d_out * ap.wo.transpose();

        Mat<T> dq = Mat<T>::Zero(c.q.rows(), c.q.cols());
        Mat<T> dk = Mat<T>::Zero(c.k.rows(), c.k.cols());
        Mat<T> dv = Mat<T>::Zero(c.v.rows(), c.v.cols());
        for (int e = 0; e < s.batch; ++e) {
            const Eigen::Index q0 = static_cast<Eigen::Index>(e) * s.n;
            const Eigen::Index k0 = cross ? s.cond_offsets[e] : q0;
            const Eigen::Index nk = cross ? s.cond_offsets[e + 1] - s.cond_offsets[e] : s.n;
            for (int hd = 0; hd < heads; ++hd) {
                const Mat<T>& probs = c.p[static_cast<std::size_t>(e) * heads + hd];
                const auto qh = c.q.block(q0, hd * dh, s.n, dh);
                const auto kh = c.k.block(k0, hd * dh, nk, dh);
                const auto vh = c.v.block(k0, hd * dh, nk, dh);
                const auto d_ctx_h = d_ctx.block(q0, hd * dh, s.n, dh);

                const Mat<T> d_probs = d_ctx_h * vh.transpose();
                dv.block(k0, hd * dh, nk, dh) += probs.transpose() * d_ctx_h;
                const auto row_dot = (d_probs.array() * probs.array()).rowwise().sum().eval();
                const Mat<T> d_scores = (probs.array() * (d_probs.array().colwise() - row_dot)).matrix() * scale;
                dq.block(q0, hd * dh, s.n, dh) += d_scores * kh;
                dk.block(k0, hd * dh, nk, dh) += d_scores.transpose() * qh;
            }
        }

        const Mat<T>& kv_src = cross ? s.cond_rows : c.normed;
        ag.wq += c.normed.transpose() * dq;
        ag.bq += dq.colwise().sum();
        ag.wk += kv_src.transpose() * dk;
        ag.bk += dk.colwise().sum();
        ag.wv += kv_src.transpose() * dv;
        ag.bv += dv.colwise().sum();

        Mat<T> d_normed = dq * ap.wq.transpose();
        if (!cross) d_normed += dk * ap.wk.transpose() + dv * ap.wv.transpose();
        return layer_norm_backward(d_normed, ap.norm_gain, c.norm, ag.norm_gain, ag.norm_bias);
    }

    const McmParams<T>& p_;
    const McmConfig& cfg_;
    Rng* rng_;
};

} // namespace

template <typename T>
Mat<T> Model<T>::hidden(const TokenSequence& tokens, const ConditionEmbedding* cond) const {
    const TokenSequence* seqs[1] = {&tokens};
    const ConditionEmbedding* conds[1] = {cond};
    Engine<T> engine(params_, nullptr);
    ForwardState<T> state;
    engine.prepare(seqs, conds, state);
    engine.forward(state);
    return std::move(state.out);
}

template <typename T>
Mat<T> Model<T>::logits(const TokenSequence& tokens, const ConditionEmbedding* cond) const {
    Mat<T> out = hidden(tokens, cond) * params_.head;
    add_row(out, params_.head_bias);
    return out;
}

template <typename T>
T Model<T>::loss(std::span<const TrainingExample> batch, McmParams<T>* grads, Rng* dropout_rng) const {
    if (batch.empty()) fail(ErrorKind::EmptyDataset, "empty batch");
    std::vector<const TokenSequence*> seqs;
    std::vector<const ConditionEmbedding*> conds;
    std::vector<Eigen::Index> target_rows;
    std::vector<int> target_codes;
    const auto n = static_cast<Eigen::Index>(batch[0].tokens.size());
    for (std::size_t e = 0; e < batch.size(); ++e) {
        const auto& ex = batch[e];
        if (ex.targets.empty()) fail(ErrorKind::EmptyTargets, "example " + std::to_string(e) + " has no targets");
        seqs.push_back(&ex.tokens);
        conds.push_back(ex.condition);
        for (const auto& t : ex.targets) {
            if (t.position < 0 || t.position >= static_cast<int>(ex.tokens.size()))
                fail(ErrorKind::ShapeMismatch, "target position outside the sequence");
            target_rows.push_back(static_cast<Eigen::Index>(e) * n + t.position);
            target_codes.push_back(t.code.value());
        }
    }

    Engine<T> engine(params_, dropout_rng);
    ForwardState<T> state;
    engine.prepare(seqs, conds, state);
    engine.forward(state);

    const auto n_targets = static_cast<Eigen::Index>(target_rows.size());
    Mat<T> z(n_targets, params_.config.d_model);
    for (Eigen::Index t = 0; t < n_targets; ++t) z.row(t) = state.out.row(target_rows[t]);
    Mat<T> logits = z * params_.head;
    add_row(logits, params_.head_bias);
    Mat<T> probs = softmax_rows<T>(logits);

    // log-sum-exp form keeps the loss accurate when probabilities underflow.
    T total = 0;
    for (Eigen::Index t = 0; t < n_targets; ++t) {
        const T mx = logits.row(t).maxCoeff();
        const T lse = mx + std::log((logits.row(t).array() - mx).exp().sum());
        total += lse - logits(t, target_codes[t]);
    }
    const T loss = total / static_cast<T>(n_targets);
    if (!grads) return loss;

    *grads = params_.zeros_like();
    Mat<T>& d_logits = probs;
    for (Eigen::Index t = 0; t < n_targets; ++t) d_logits(t, target_codes[t]) -= T(1);
    d_logits /= static_cast<T>(n_targets);
    grads->head.noalias() = z.transpose() * d_logits;
    grads->head_bias = d_logits.colwise().sum();
    const Mat<T> dz = d_logits * params_.head.transpose();
    Mat<T> d_out = Mat<T>::Zero(state.out.rows(), state.out.cols());
    for (Eigen::Index t = 0; t < n_targets; ++t) d_out.row(target_rows[t]) += dz.row(t);
    engine.backward(state, d_out, *grads);
    return loss;
}

template class Model<float>;
template class Model<double>;
// extended precision for finite-difference checks
template class Model<long double>;

} // namespace palettekit::mcm
