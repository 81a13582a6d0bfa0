#include "palettekit/cli.hpp"

#include "palettekit/condition.hpp"
#include "palettekit/dataset.hpp"
#include "palettekit/error.hpp"
#include "palettekit/image.hpp"
#include "palettekit/kmeans.hpp"
#include "palettekit/mcm/checkpoint.hpp"
#include "palettekit/mcm/evaluate.hpp"
#include "palettekit/mcm/inference.hpp"
#include "palettekit/mcm/train.hpp"
#include "palettekit/metrics.hpp"
#include "palettekit/palette_json.hpp"
#include "palettekit/projection.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace palettekit::cli {

namespace {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Decode: return kIo;
    case ErrorKind::EmptyCorpus: return kEmptyCorpus;
    case ErrorKind::NoMaskedSlots:
    case ErrorKind::InvalidColor:
    case ErrorKind::PaletteTooLarge:
    case ErrorKind::TooManyMasks:
    case ErrorKind::Parse: return kBadPalette;
    case ErrorKind::TooManyPoints: return kResourceCap;
    case ErrorKind::InvalidArgument: return kUsage;
    default: return kModel;
    }
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            seeds.push_back(std::stoull(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidArgument, "bad seed '" + item + "'");
        }
    }
    if (seeds.empty()) fail(ErrorKind::InvalidArgument, "at least one seed is required");
    return seeds;
}

std::pair<int, int> parse_shape(const std::string& text) {
    const auto x = text.find_first_of("xX");
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        const int rows = std::stoi(text.substr(0, x));
        const int cols = std::stoi(text.substr(x + 1));
        if (rows < 1 || cols < 1) throw std::invalid_argument(text);
        return {rows, cols};
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "shape must look like 4x32, got '" + text + "'");
    }
}

// Owns the condition embeddings referenced by PaletteExamples.
struct LoadedExamples {
    std::vector<std::unique_ptr<ConditionEmbedding>> conditions;
    std::vector<mcm::PaletteExample> examples;
};

LoadedExamples to_examples(const std::vector<ManifestRecord>& records, bool conditioned) {
    LoadedExamples out;
    for (const auto& r : records) {
        const ConditionEmbedding* cond = nullptr;
        if (conditioned) {
            if (!r.cond_path) fail(ErrorKind::MissingCondition, "record '" + r.id + "' has no cond_path");
            out.conditions.push_back(std::make_unique<ConditionEmbedding>(read_pteb(*r.cond_path)));
            cond = out.conditions.back().get();
        }
        out.examples.push_back({r.palette, cond});
    }
    return out;
}

std::optional<ConditionEmbedding> maybe_condition(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return read_pteb(path);
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
    std::string image;
    int k = 5;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
    const Palette p = extract_palette(load_image(a.image), a.k, a.seed);
    if (!a.out.empty()) write_palette(a.out, p);
    out << palette_to_hex_string(p) << '\n';
    return kOk;
}

struct BuildArgs {
    std::string images;
    std::string captions;
    std::string out;
    std::string split = "0.8,0.1,0.1";
    std::uint64_t seed = 0;
    int k = 5;
    std::string stub_cond;
    std::string cond_dir;
};

int cmd_build_dataset(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    const SplitSpec split = parse_split(a.split);
    auto report = build_manifest(a.images, a.captions, a.k, split, a.seed);
    auto records = std::move(report.records);
    if (!a.stub_cond.empty()) {
        const auto [rows, cols] = parse_shape(a.stub_cond);
        const fs::path out_path(a.out);
        const fs::path cond_dir = out_path.parent_path() / (out_path.stem().string() + "_cond");
        records = attach_stub_conditions(records, cond_dir, rows, cols);
    } else if (!a.cond_dir.empty()) {
        records = attach_external_conditions(records, a.cond_dir);
    }
    write_manifest(a.out, records);

    std::map<Split, int> counts;
    for (const auto& r : records) ++counts[r.split];
    out << "wrote " << records.size() << " records (train " << counts[Split::Train] << ", val "
        << counts[Split::Val] << ", test " << counts[Split::Test] << ") to " << a.out << '\n';
    if (report.skipped) err << "skipped " << report.skipped << " unusable images\n";
    return kOk;
}

struct TrainArgs {
    std::string manifest;
    std::string variant = "palette-only";
    std::string config;
    std::string out;
    std::string history;
    std::uint64_t seed = 0;
    int max_epochs = 0;
    bool verbose = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    if (a.variant != "palette-only" && a.variant != "cond")
        fail(ErrorKind::InvalidConfig, "variant must be palette-only or cond");
    const bool conditioned = a.variant == "cond";

    mcm::McmConfig cfg;
    mcm::TrainConfig tcfg;
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) fail(ErrorKind::InvalidConfig, "cannot open config " + a.config);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::InvalidConfig, a.config + ": " + e.what());
        }
        if (j.contains("model")) {
            auto model = j["model"];
            model.erase("conditioning");
            model.erase("cond_dim");
            cfg = mcm::config_from_json(model);
        }
        if (j.contains("train")) tcfg = mcm::train_config_from_json(j["train"]);
    }
    tcfg.seed = a.seed;
    if (a.max_epochs > 0) tcfg.max_epochs = a.max_epochs;

    std::vector<ManifestRecord> records;
    try {
        records = load_manifest(a.manifest);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse) throw Error(ErrorKind::Format, e.what());
        throw;
    }
    const auto train_recs = select_split(records, Split::Train);
    const auto val_recs = select_split(records, Split::Val);
    if (train_recs.empty() || val_recs.empty())
        fail(ErrorKind::EmptyDataset, "manifest needs non-empty train and val splits");
    const auto train_set = to_examples(train_recs, conditioned);
    const auto val_set = to_examples(val_recs, conditioned);
    if (conditioned) {
        cfg.conditioning = mcm::Conditioning::Cross;
        cfg.cond_dim = train_set.conditions.front()->cols();
    }
    cfg.validate();

    mcm::TrainHooks hooks;
    if (a.verbose)
        hooks.on_epoch = [&](int epoch, const mcm::TrainHistory& h) {
            err << "epoch " << epoch << " train_loss " << format_double(h.train_loss.back()) << " val_loss "
                << format_double(h.val_loss.back()) << " val_acc1 " << format_double(h.val_accuracy.back()) << '\n';
        };
    const auto result = mcm::train(cfg, tcfg, train_set.examples, val_set.examples, hooks);
    mcm::save_checkpoint(result.params, a.out);

    const std::string history_path = a.history.empty() ? a.out + ".history.csv" : a.history;
    std::ofstream hist(history_path, std::ios::binary | std::ios::trunc);
    if (!hist) fail(ErrorKind::Io, "cannot write " + history_path);
    hist << "epoch,train_loss,val_loss,val_acc1\n";
    for (int e = 0; e < result.history.epochs(); ++e)
        hist << e + 1 << ',' << format_double(result.history.train_loss[e]) << ','
             << format_double(result.history.val_loss[e]) << ',' << format_double(result.history.val_accuracy[e])
             << '\n';
    out << "trained " << result.history.epochs() << " epochs, best epoch " << result.history.best_epoch
        << "; checkpoint " << a.out << ", history " << history_path << '\n';
    return kOk;
}

struct PredictArgs {
    std::string ckpt;
    std::string palette;
    std::string cond;
    std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
    const auto masked = read_masked_palette(a.palette);
    const auto params = mcm::load_checkpoint(a.ckpt);
    const auto cond = maybe_condition(a.cond);
    const Palette p = mcm::predict_masked(params, masked, cond ? &*cond : nullptr);
    if (!a.out.empty()) write_palette(a.out, p);
    out << palette_to_json(p).dump() << '\n' << palette_to_hex_string(p) << '\n';
    return kOk;
}

struct EvalModelArgs {
    std::string ckpt;
    std::string manifest;
    std::string split = "test";
    std::string seeds = "0,1,2";
    std::string out;
};

int cmd_eval_model(const EvalModelArgs& a, std::ostream& out) {
    const auto seeds = parse_seeds(a.seeds);
    const auto split = split_from_string(a.split);
    std::vector<mcm::GridRow> rows;
    try {
        const auto params = mcm::load_checkpoint(a.ckpt);
        const auto records = select_split(load_manifest(a.manifest), split);
        if (records.empty()) fail(ErrorKind::EmptyDataset, "split '" + a.split + "' is empty");
        const auto data = to_examples(records, params.config.conditioned());
        rows = mcm::evaluate_grid(params, data.examples, seeds);
    } catch (const Error& e) {
        // Anything that stops the model or data from loading is a model error here.
        if (e.kind() == ErrorKind::Io || e.kind() == ErrorKind::Decode || e.kind() == ErrorKind::Parse)
            throw Error(ErrorKind::Format, e.what());
        throw;
    }

    std::ostringstream csv;
    csv << "n_mask,accuracy_pct,dccw\n";
    for (const auto& r : rows)
        csv << r.n_mask << ',' << format_double(100.0 * r.accuracy) << ',' << format_double(r.dccw) << '\n';
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
        if (!f) fail(ErrorKind::Io, "cannot write " + a.out);
        f << csv.str();
    }
    out << csv.str();
    return kOk;
}

struct EvalImagesArgs {
    std::string pairs;
    std::string out;
    std::uint64_t seed = 0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

Palette parse_reference_palette(const std::string& cell, const fs::path& base) {
    // Either a palette JSON file or "#RRGGBB" entries separated by spaces or ';'.
    if (!cell.empty() && cell[0] == '#') {
        std::vector<LabColor> colors;
        std::string item;
        std::stringstream ss(cell);
        while (ss >> item) {
            std::stringstream parts(item);
            std::string hex;
            while (std::getline(parts, hex, ';'))
                if (!hex.empty()) colors.push_back(srgb_to_lab(parse_hex(hex)));
        }
        return Palette(std::move(colors));
    }
    return read_palette(base / cell);
}

int cmd_eval_images(const EvalImagesArgs& a, std::ostream& out) {
    std::ifstream in(a.pairs);
    if (!in) fail(ErrorKind::Io, "cannot open pairs file " + a.pairs);
    const fs::path base = fs::path(a.pairs).parent_path();

    struct Row {
        std::string id;
        std::optional<MetricsRecord> metrics;
        std::string error;
    };
    std::vector<Row> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (first && !cells.empty() && cells[0] == "gen_path") {
            first = false;
            continue;
        }
        first = false;
        Row row;
        row.id = cells.size() > 0 ? fs::path(cells[0]).stem().string() : "";
        try {
            if (cells.size() < 2 || cells.size() > 3)
                fail(ErrorKind::Parse, "pair row needs gen_path,ref_path[,ref_palette]");
            const ImageBuffer gen = load_image(base / cells[0]);
            const ImageBuffer ref = load_image(base / cells[1]);
            MetricsRecord m;
            m.hist_bha = bhattacharyya_distance(color_histogram(gen), color_histogram(ref));
            m.psnr = psnr(gen, ref);
            m.ssim = ssim(gen, ref);
            const Palette target = cells.size() == 3 && !cells[2].empty() ? parse_reference_palette(cells[2], base)
                                                                          : extract_palette(ref, 5, a.seed);
            m.dccw = dccw(extract_palette(gen, 5, a.seed), target);
            row.metrics = m;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }

    auto sanitize = [](std::string s) {
        for (char& c : s)
            if (c == ',' || c == '\n' || c == '"') c = ' ';
        return s;
    };
    std::ostringstream csv;
    csv << "id,hist_bha,dccw,psnr,ssim,error\n";
    MetricsRecord sum;
    std::size_t ok = 0;
    for (const auto& r : rows) {
        if (r.metrics) {
            const auto& m = *r.metrics;
            csv << sanitize(r.id) << ',' << format_double(m.hist_bha) << ',' << format_double(m.dccw) << ','
                << format_double(m.psnr) << ',' << format_double(m.ssim) << ",\n";
            sum.hist_bha += m.hist_bha;
            sum.dccw += m.dccw;
            sum.psnr += m.psnr;
            sum.ssim += m.ssim;
            ++ok;
        } else {
            csv << sanitize(r.id) << ",,,,," << sanitize(r.error) << '\n';
        }
    }
    if (ok) {
        const double n = static_cast<double>(ok);
        csv << "mean," << format_double(sum.hist_bha / n) << ',' << format_double(sum.dccw / n) << ','
            << format_double(sum.psnr / n) << ',' << format_double(sum.ssim / n) << ",\n";
    }
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
        if (!f) fail(ErrorKind::Io, "cannot write " + a.out);
        f << csv.str();
    }
    out << csv.str();
    if (ok == 0) fail(ErrorKind::Io, "no image pair could be evaluated");
    return kOk;
}

struct EmbedArgs {
    std::string ckpt;
    std::string palette;
    std::string cond;
    std::string out;
};

int cmd_embed(const EmbedArgs& a, std::ostream& out) {
    const auto masked = read_masked_palette(a.palette);
    std::vector<LabColor> colors;
    for (const auto& slot : masked) {
        if (!slot) fail(ErrorKind::NoMaskedSlots, "embedding needs a full palette; found a null slot");
        colors.push_back(*slot);
    }
    const auto params = mcm::load_checkpoint(a.ckpt);
    const auto cond = maybe_condition(a.cond);
    const auto v = mcm::embed_palette(params, Palette(std::move(colors)), cond ? &*cond : nullptr);
    write_pteb(a.out, ConditionEmbedding(1, static_cast<int>(v.size()), v));
    out << "wrote 1x" << v.size() << " palette embedding to " << a.out << '\n';
    return kOk;
}

struct PlotArgs {
    std::string manifest;
    std::string method = "pca";
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_plot_colors(const PlotArgs& a, std::ostream& out) {
    const auto method = projection_method_from_string(a.method);
    const auto points = project_colors_2d(load_manifest(a.manifest), method, a.seed);
    fs::path svg(a.out);
    if (svg.extension() != ".svg") svg += ".svg";
    fs::path csv = svg;
    csv.replace_extension(".csv");
    write_projection_svg(svg, points);
    write_projection_csv(csv, points);
    out << "projected " << points.size() << " distinct colors; wrote " << svg.string() << " and " << csv.string()
        << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Palette extraction, masked color modeling and color metrics", "palettekit"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

    std::function<int()> action;

    ExtractArgs ex;
    auto* extract = app.add_subcommand("extract", "Extract a k-color palette from an image");
    extract->add_option("--image", ex.image, "Input PNG or JPEG")->required();
    extract->add_option("--k", ex.k, "Palette size")->check(CLI::Range(1, 8));
    extract->add_option("--seed", ex.seed, "k-means++ seed");
    extract->add_option("--out", ex.out, "Palette JSON output");
    extract->callback([&] { action = [&] { return cmd_extract(ex, out); }; });

    BuildArgs bd;
    auto* build = app.add_subcommand("build-dataset", "Build a palette-text-image manifest");
    build->add_option("--images", bd.images, "Image directory")->required();
    build->add_option("--captions", bd.captions, "filename<TAB>caption file")->required();
    build->add_option("--out", bd.out, "Manifest JSONL output")->required();
    build->add_option("--split", bd.split, "train,val,test fractions");
    build->add_option("--seed", bd.seed, "Split and k-means seed");
    build->add_option("--k", bd.k, "Palette size")->check(CLI::Range(1, 8));
    auto* stub = build->add_option("--stub-cond", bd.stub_cond, "Attach stub condition embeddings of shape SxD");
    build->add_option("--cond-dir", bd.cond_dir, "Directory holding <id>.pteb files")->excludes(stub);
    build->callback([&] { action = [&] { return cmd_build_dataset(bd, out, err); }; });

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "Train a masked color model");
    train->add_option("--manifest", tr.manifest, "Manifest JSONL")->required();
    train->add_option("--variant", tr.variant, "palette-only or cond")
        ->check(CLI::IsMember({"palette-only", "cond"}));
    train->add_option("--config", tr.config, "JSON file with optional \"model\" and \"train\" objects");
    train->add_option("--out", tr.out, "Checkpoint output")->required();
    train->add_option("--history", tr.history, "History CSV (default: <out>.history.csv)");
    train->add_option("--seed", tr.seed, "Training seed");
    train->add_option("--max-epochs", tr.max_epochs, "Override the epoch cap (0 keeps the config value)");
    train->callback([&] {
        tr.verbose = verbose;
        action = [&] { return cmd_train(tr, out, err); };
    });

    PredictArgs pr;
    auto* predict = app.add_subcommand("predict", "Fill null slots of a palette");
    predict->add_option("--ckpt", pr.ckpt, "Checkpoint")->required();
    predict->add_option("--palette", pr.palette, "Palette JSON with null for masked slots")->required();
    predict->add_option("--cond", pr.cond, "Condition embedding (PTEB) for conditioned models");
    predict->add_option("--out", pr.out, "Completed palette JSON output");
    predict->callback([&] { action = [&] { return cmd_predict(pr, out); }; });

    EvalModelArgs em;
    auto* eval_model = app.add_subcommand("eval-model", "Masked-prediction grid for n_mask = 1..5");
    eval_model->add_option("--ckpt", em.ckpt, "Checkpoint")->required();
    eval_model->add_option("--manifest", em.manifest, "Manifest JSONL")->required();
    eval_model->add_option("--split", em.split, "Split to evaluate")->check(CLI::IsMember({"train", "val", "test"}));
    eval_model->add_option("--seeds", em.seeds, "Comma-separated masking seeds");
    eval_model->add_option("--out", em.out, "Grid CSV output");
    eval_model->callback([&] { action = [&] { return cmd_eval_model(em, out); }; });

    EvalImagesArgs ei;
    auto* eval_images = app.add_subcommand("eval-images", "Color metrics for generated/reference image pairs");
    eval_images->add_option("--pairs", ei.pairs, "CSV of gen_path,ref_path[,ref_palette]")->required();
    eval_images->add_option("--out", ei.out, "Metrics CSV output");
    eval_images->add_option("--seed", ei.seed, "Palette extraction seed");
    eval_images->callback([&] { action = [&] { return cmd_eval_images(ei, out); }; });

    EmbedArgs eb;
    auto* embed = app.add_subcommand("embed", "Export a palette embedding as PTEB");
    embed->add_option("--ckpt", eb.ckpt, "Checkpoint")->required();
    embed->add_option("--palette", eb.palette, "Full palette JSON")->required();
    embed->add_option("--cond", eb.cond, "Condition embedding (PTEB) for conditioned models");
    embed->add_option("--out", eb.out, "PTEB output")->required();
    embed->callback([&] { action = [&] { return cmd_embed(eb, out); }; });

    PlotArgs pl;
    auto* plot = app.add_subcommand("plot-colors", "2D projection of all palette colors (SVG + CSV)");
    plot->add_option("--manifest", pl.manifest, "Manifest JSONL")->required();
    plot->add_option("--method", pl.method, "pca or tsne")->check(CLI::IsMember({"pca", "tsne"}));
    plot->add_option("--seed", pl.seed, "t-SNE seed");
    plot->add_option("--out", pl.out, "Output path; .svg and .csv are written side by side")->required();
    plot->callback([&] { action = [&] { return cmd_plot_colors(pl, out); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == static_cast<int>(CLI::ExitCodes::Success) ? kOk : kUsage;
    }

    try {
        return action ? action() : kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
}

} // namespace palettekit::cli
