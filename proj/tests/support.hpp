#pragma once

#include "palettekit/color.hpp"
#include "palettekit/condition.hpp"
#include "palettekit/image.hpp"
#include "palettekit/mcm/train.hpp"
#include "palettekit/rng.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("palettekit-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Image made of vertical stripes, one per color, with the given widths.
inline palettekit::ImageBuffer stripes(const std::vector<palettekit::SrgbColor>& colors,
                                       const std::vector<int>& widths, int height) {
    int width = 0;
    for (int w : widths) width += w;
    palettekit::ImageBuffer img(width, height);
    int x0 = 0;
    for (std::size_t c = 0; c < colors.size(); ++c) {
        for (int x = x0; x < x0 + widths[c]; ++x)
            for (int y = 0; y < height; ++y) img.at(x, y) = colors[c];
        x0 += widths[c];
    }
    return img;
}

// Ten-image toy corpus with five well separated colors per image plus a
// captions file. Returns the captions path.
inline fs::path write_toy_corpus(const fs::path& dir, int count = 10) {
    const fs::path images = dir / "images";
    fs::create_directories(images);
    std::ofstream captions(dir / "captions.tsv", std::ios::binary);
    palettekit::Rng rng(7);
    for (int i = 0; i < count; ++i) {
        std::vector<palettekit::SrgbColor> colors;
        for (int c = 0; c < 5; ++c)
            colors.push_back({static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                              static_cast<std::uint8_t>(rng.below(256))});
        const std::string name = "img" + std::to_string(i) + ".png";
        palettekit::save_png(images / name, stripes(colors, {6, 7, 8, 9, 10}, 24));
        captions << name << '\t' << "toy image number " << i << '\n';
    }
    return dir / "captions.tsv";
}

// ---------------------------------------------------------------------------
// Synthetic masked-color benchmark: ten fixed five-color templates whose
// colors come from three choices per slot, so several templates share
// colors and hiding more of a palette makes it more ambiguous. Samples jitter
// each color inside its quantization bin, so codes equal the template's.

struct SyntheticBenchmark {
    std::vector<std::string> names;
    std::vector<palettekit::Palette> templates;
    std::vector<std::unique_ptr<palettekit::ConditionEmbedding>> conditions; // one per template
    std::vector<palettekit::mcm::PaletteExample> train, val, test;           // palette-only
    std::vector<palettekit::mcm::PaletteExample> train_cond, val_cond, test_cond;
};

inline constexpr int kCondRows = 4;
inline constexpr int kCondCols = 16;

inline palettekit::LabColor bin_center(int il, int ia, int ib) {
    return palettekit::dequantize(palettekit::ColorCode::from_bins(il, ia, ib));
}

inline std::unique_ptr<SyntheticBenchmark> make_synthetic_benchmark(std::uint64_t seed, int n_train = 1000,
                                                                     int n_val = 200, int n_test = 200) {
    using palettekit::LabColor;
    // slot -> three alternative colors (as bin indices)
    const std::array<std::array<std::array<int, 3>, 3>, 5> choices{{
        {{{13, 8, 11}, {12, 10, 9}, {14, 7, 12}}}, // pale yellows / creams
        {{{9, 12, 11}, {8, 13, 9}, {10, 11, 12}}}, // oranges / reds
        {{{6, 5, 9}, {5, 6, 5}, {7, 4, 8}}},       // greens / teals
        {{{4, 9, 4}, {3, 10, 3}, {5, 8, 5}}},      // blues / purples
        {{{2, 8, 7}, {1, 9, 8}, {3, 7, 6}}},       // near blacks
    }};
    const std::array<std::array<int, 5>, 10> layout{{
        {0, 0, 2, 1, 1},
        {0, 0, 0, 1, 0},
        {0, 0, 1, 1, 0},
        {2, 1, 1, 0, 1},
        {1, 0, 1, 2, 1},
        {1, 1, 1, 0, 0},
        {1, 2, 1, 1, 0},
        {2, 2, 2, 0, 1},
        {0, 1, 0, 0, 0},
        {1, 2, 1, 0, 1},
    }};
    const std::array<const char*, 10> names{"sunset harbor", "autumn orchard", "desert bloom",  "coral reef",
                                            "lavender field", "mossy canyon",  "city at dusk",   "tropical storm",
                                            "winter market",  "night garden"};

    auto bench = std::make_unique<SyntheticBenchmark>();
    for (std::size_t t = 0; t < layout.size(); ++t) {
        std::vector<LabColor> colors;
        for (int slot = 0; slot < 5; ++slot) {
            const auto& b = choices[slot][layout[t][slot]];
            colors.push_back(bin_center(b[0], b[1], b[2]));
        }
        bench->names.emplace_back(names[t]);
        bench->templates.emplace_back(std::move(colors));
        bench->conditions.push_back(std::make_unique<palettekit::ConditionEmbedding>(
            palettekit::stub_condition_encoder(names[t], kCondRows, kCondCols)));
    }

    palettekit::Rng rng(seed);
    auto jitter = [&](const palettekit::Palette& p) {
        std::vector<LabColor> out;
        for (const auto& c : p)
            out.emplace_back(c.l() + rng.uniform(-2.5, 2.5), c.a() + rng.uniform(-6.0, 6.0),
                             c.b() + rng.uniform(-6.0, 6.0));
        return palettekit::Palette(std::move(out));
    };
    auto fill = [&](int count, std::vector<palettekit::mcm::PaletteExample>& plain,
                    std::vector<palettekit::mcm::PaletteExample>& cond) {
        for (int i = 0; i < count; ++i) {
            const std::size_t t = static_cast<std::size_t>(i) % layout.size();
            const auto p = jitter(bench->templates[t]);
            plain.push_back({p, nullptr});
            cond.push_back({p, bench->conditions[t].get()});
        }
    };
    fill(n_train, bench->train, bench->train_cond);
    fill(n_val, bench->val, bench->val_cond);
    fill(n_test, bench->test, bench->test_cond);
    return bench;
}

} // namespace testsupport
