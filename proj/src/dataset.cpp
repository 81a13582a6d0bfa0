#include "palettekit/dataset.hpp"

#include "palettekit/condition.hpp"
#include "palettekit/error.hpp"
#include "palettekit/image.hpp"
#include "palettekit/kmeans.hpp"
#include "palettekit/palette_json.hpp"
#include "palettekit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <json.hpp>
#include <set>

namespace fs = std::filesystem;

namespace palettekit {

std::string_view to_string(Split s) noexcept {
    switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    }
    return "train";
}

Split split_from_string(std::string_view s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    fail(ErrorKind::Parse, "unknown split '" + std::string(s) + "'");
}

void SplitSpec::validate() const {
    for (double f : {train, val, test})
        if (!(f >= 0.0 && f <= 1.0)) fail(ErrorKind::InvalidArgument, "split fractions must lie in [0, 1]");
    if (std::abs(train + val + test - 1.0) > 1e-9) fail(ErrorKind::InvalidArgument, "split fractions must sum to 1");
}

SplitSpec parse_split(std::string_view text) {
    std::vector<double> parts;
    std::string item;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            try {
                std::size_t used = 0;
                parts.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                fail(ErrorKind::InvalidArgument, "bad split fraction '" + item + "'");
            }
            item.clear();
        } else {
            item.push_back(text[i]);
        }
    }
    if (parts.size() != 3) fail(ErrorKind::InvalidArgument, "split needs three comma-separated fractions");
    SplitSpec s{parts[0], parts[1], parts[2]};
    s.validate();
    return s;
}

namespace {

std::vector<std::pair<std::string, std::string>> read_captions(const fs::path& file) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::Io, "cannot open captions file " + file.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            fail(ErrorKind::Parse, file.string() + ":" + std::to_string(line_no) + ": expected filename<TAB>caption");
        out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return out;
}

fs::path absolute_normal(const fs::path& p) { return fs::absolute(p).lexically_normal(); }

} // namespace

BuildReport build_manifest(const fs::path& image_dir, const fs::path& captions_file, int k, const SplitSpec& split,
                           std::uint64_t seed) {
    split.validate();
    if (!fs::is_directory(image_dir)) fail(ErrorKind::Io, "image directory " + image_dir.string() + " not found");
    auto captions = read_captions(captions_file);
    std::sort(captions.begin(), captions.end());

    BuildReport report;
    std::set<std::string> ids;
    for (const auto& [filename, caption] : captions) {
        const fs::path path = absolute_normal(image_dir / filename);
        const std::string id = fs::path(filename).stem().string();
        if (!ids.insert(id).second) fail(ErrorKind::DuplicateId, "two captioned images map to id '" + id + "'");
        try {
            const Palette palette = extract_palette(load_image(path), k, seed);
            if (static_cast<int>(palette.size()) != k) {
                std::cerr << "warning: skipping " << filename << ": fewer than " << k << " distinct colors\n";
                ++report.skipped;
                continue;
            }
            report.records.push_back({id, path, caption, palette, Split::Train, std::nullopt});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Io && e.kind() != ErrorKind::Decode) throw;
            std::cerr << "warning: skipping " << filename << ": " << e.what() << '\n';
            ++report.skipped;
        }
    }
    if (report.records.empty()) fail(ErrorKind::EmptyCorpus, "no usable images under " + image_dir.string());

    auto& recs = report.records;
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::vector<std::size_t> order(recs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(std::span(order));
    const auto n = static_cast<double>(recs.size());
    const auto n_train = static_cast<std::size_t>(std::llround(split.train * n));
    const auto n_val = std::min(recs.size() - n_train, static_cast<std::size_t>(std::llround(split.val * n)));
    for (std::size_t j = 0; j < order.size(); ++j)
        recs[order[j]].split = j < n_train ? Split::Train : j < n_train + n_val ? Split::Val : Split::Test;
    return report;
}

void write_manifest(const fs::path& path, const std::vector<ManifestRecord>& records) {
    const fs::path base = absolute_normal(path).parent_path();
    std::vector<const ManifestRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    for (const auto* r : sorted) {
        nlohmann::ordered_json j;
        j["id"] = r->id;
        j["image_path"] = absolute_normal(r->image_path).lexically_relative(base).generic_string();
        j["caption"] = r->caption;
        j["palette"] = palette_to_json(r->palette);
        j["split"] = std::string(to_string(r->split));
        j["cond_path"] = r->cond_path
                             ? nlohmann::ordered_json(absolute_normal(*r->cond_path).lexically_relative(base).generic_string())
                             : nlohmann::ordered_json(nullptr);
        out << j.dump() << '\n';
    }
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<ManifestRecord> load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open manifest " + path.string());
    const fs::path base = absolute_normal(path).parent_path();
    std::vector<ManifestRecord> out;
    std::set<std::string> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
        ManifestRecord r;
        try {
            const auto j = nlohmann::json::parse(line);
            r.id = j.at("id").get<std::string>();
            r.image_path = (base / j.at("image_path").get<std::string>()).lexically_normal();
            r.caption = j.at("caption").get<std::string>();
            r.palette = palette_from_json(j.at("palette"));
            r.split = split_from_string(j.at("split").get<std::string>());
            if (j.contains("cond_path") && !j.at("cond_path").is_null())
                r.cond_path = (base / j.at("cond_path").get<std::string>()).lexically_normal();
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::Parse, where + "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            fail(ErrorKind::Parse, where + "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (r.id.empty()) fail(ErrorKind::Parse, where + "line " + std::to_string(line_no) + ": empty id");
        if (!ids.insert(r.id).second) fail(ErrorKind::DuplicateId, where + "duplicate id '" + r.id + "'");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ManifestRecord> select_split(const std::vector<ManifestRecord>& records, Split split) {
    std::vector<ManifestRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const auto& r) { return r.split == split; });
    return out;
}

std::vector<ManifestRecord> attach_stub_conditions(const std::vector<ManifestRecord>& records, const fs::path& out_dir,
                                                   int rows, int cols) {
    fs::create_directories(out_dir);
    std::vector<ManifestRecord> out = records;
    for (auto& r : out) {
        const fs::path file = absolute_normal(out_dir / (r.id + ".pteb"));
        write_pteb(file, stub_condition_encoder(r.caption, rows, cols));
        r.cond_path = file;
    }
    return out;
}

std::vector<ManifestRecord> attach_external_conditions(const std::vector<ManifestRecord>& records,
                                                       const fs::path& dir, int cols) {
    std::vector<std::string> missing;
    for (const auto& r : records)
        if (!fs::is_regular_file(dir / (r.id + ".pteb"))) missing.push_back(r.id);
    if (!missing.empty()) {
        std::string list;
        for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
        fail(ErrorKind::MissingEmbedding, "no embedding file for: " + list);
    }
    std::vector<ManifestRecord> out = records;
    for (auto& r : out) {
        const fs::path file = absolute_normal(dir / (r.id + ".pteb"));
        const auto e = read_pteb(file);
        if (cols == 0) cols = e.cols();
        if (e.cols() != cols)
            fail(ErrorKind::ShapeMismatch, file.string() + " has " + std::to_string(e.cols()) + " columns, expected " +
                                               std::to_string(cols));
        r.cond_path = file;
    }
    return out;
}

} // namespace palettekit
