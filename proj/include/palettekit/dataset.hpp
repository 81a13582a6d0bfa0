#pragma once

#include "palettekit/color.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace palettekit {

enum class Split { Train, Val, Test };

std::string_view to_string(Split s) noexcept;
Split split_from_string(std::string_view s);

struct ManifestRecord {
    std::string id;
    std::filesystem::path image_path; // absolute in memory, relative on disk
    std::string caption;
    Palette palette;
    Split split = Split::Train;
    std::optional<std::filesystem::path> cond_path;

    friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct SplitSpec {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;

    void validate() const;
};

SplitSpec parse_split(std::string_view text); // "0.8,0.1,0.1"

struct BuildReport {
    std::vector<ManifestRecord> records; // sorted by id
    std::size_t skipped = 0;             // undecodable or too few distinct colors
};

/// One record per captioned image. Captions file: UTF-8, `filename<TAB>caption`
/// per line. Splits come from a seeded shuffle of the id-sorted records
/// followed by contiguous slicing (train, then val, then test).
BuildReport build_manifest(const std::filesystem::path& image_dir, const std::filesystem::path& captions_file, int k,
                           const SplitSpec& split, std::uint64_t seed);

/// Writes JSONL in id order with paths relative to the manifest's directory.
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path);

std::vector<ManifestRecord> select_split(const std::vector<ManifestRecord>& records, Split split);

/// Stub mode: writes `<out_dir>/<id>.pteb` from the stub encoder applied to
/// each caption. Returns copies with cond_path set; nothing else changes.
std::vector<ManifestRecord> attach_stub_conditions(const std::vector<ManifestRecord>& records,
                                                   const std::filesystem::path& out_dir, int rows, int cols);

/// External mode: expects `<dir>/<id>.pteb` for every record. `cols` of 0
/// accepts any width as long as all files agree.
std::vector<ManifestRecord> attach_external_conditions(const std::vector<ManifestRecord>& records,
                                                       const std::filesystem::path& dir, int cols = 0);

} // namespace palettekit
