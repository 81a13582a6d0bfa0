#include "palettekit/condition.hpp"

#include "palettekit/binary_io.hpp"
#include "palettekit/error.hpp"
#include "palettekit/rng.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

namespace palettekit {

namespace binio {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

} // namespace binio

ConditionEmbedding::ConditionEmbedding(int rows, int cols, std::vector<float> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows < 1 || cols < 1) fail(ErrorKind::ShapeMismatch, "condition embedding needs at least one row and column");
    if (values_.size() != static_cast<std::size_t>(rows) * cols)
        fail(ErrorKind::ShapeMismatch, "condition embedding holds the wrong number of values");
    for (float v : values_)
        if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "condition embedding holds a non-finite value");
}

ConditionEmbedding stub_condition_encoder(std::string_view text, int rows, int cols) {
    if (rows < 1 || cols < 1) fail(ErrorKind::InvalidArgument, "stub encoder shape must be positive");
    Rng rng(fnv1a64(text));
    std::vector<float> values(static_cast<std::size_t>(rows) * cols);
    for (float& v : values) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    return ConditionEmbedding(rows, cols, std::move(values));
}

namespace {
constexpr char kPtebMagic[4] = {'P', 'T', 'E', 'B'};
constexpr std::uint8_t kPtebVersion = 1;
constexpr std::size_t kPtebHeader = 4 + 1 + 4 + 4;
} // namespace

std::vector<std::uint8_t> encode_pteb(const ConditionEmbedding& e) {
    std::vector<std::uint8_t> out(kPtebMagic, kPtebMagic + 4);
    out.push_back(kPtebVersion);
    binio::put_u32(out, static_cast<std::uint32_t>(e.rows()));
    binio::put_u32(out, static_cast<std::uint32_t>(e.cols()));
    for (float v : e.values()) binio::put_f32(out, v);
    return out;
}

ConditionEmbedding decode_pteb(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kPtebHeader || std::memcmp(bytes.data(), kPtebMagic, 4) != 0)
        fail(ErrorKind::Format, "not a PTEB file");
    if (bytes[4] != kPtebVersion) fail(ErrorKind::Version, "unsupported PTEB version " + std::to_string(bytes[4]));
    const std::uint32_t rows = binio::get_u32(bytes, 5);
    const std::uint32_t cols = binio::get_u32(bytes, 9);
    const std::uint64_t count = std::uint64_t(rows) * cols;
    if (rows == 0 || cols == 0 || bytes.size() != kPtebHeader + 4 * count)
        fail(ErrorKind::Format, "PTEB payload size does not match its header");
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = binio::get_f32(bytes, kPtebHeader + 4 * i);
    return ConditionEmbedding(static_cast<int>(rows), static_cast<int>(cols), std::move(values));
}

void write_pteb(const std::filesystem::path& path, const ConditionEmbedding& e) {
    binio::write_file(path, encode_pteb(e));
}

ConditionEmbedding read_pteb(const std::filesystem::path& path) {
    const auto bytes = binio::read_file(path);
    try {
        return decode_pteb(bytes);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

} // namespace palettekit
