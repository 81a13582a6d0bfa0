#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace palettekit {

/// Row-major S x D matrix of encoder features (text or image tokens).
class ConditionEmbedding {
public:
    ConditionEmbedding() = default;
    ConditionEmbedding(int rows, int cols, std::vector<float> values);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    float at(int r, int c) const { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
    std::span<const float> values() const noexcept { return values_; }

    friend bool operator==(const ConditionEmbedding&, const ConditionEmbedding&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<float> values_;
};

/// Deterministic stand-in for a pretrained encoder: FNV-1a of the text seeds
/// a generator that fills an S x D matrix with values in [-1, 1].
ConditionEmbedding stub_condition_encoder(std::string_view text, int rows, int cols);

// PTEB container: "PTEB", version byte 1, u32 rows, u32 cols (little
// endian), then rows*cols little-endian f32 values in row-major order.
std::vector<std::uint8_t> encode_pteb(const ConditionEmbedding& e);
ConditionEmbedding decode_pteb(std::span<const std::uint8_t> bytes);
void write_pteb(const std::filesystem::path& path, const ConditionEmbedding& e);
ConditionEmbedding read_pteb(const std::filesystem::path& path);

} // namespace palettekit
