#pragma once

#include "palettekit/mcm/params.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace palettekit::mcm {

// Layout: "MCM1", u32 little-endian header length, JSON header
// {"version", "config", "tensors": [{"name", "shape", "offset"}]}, then the
// tensors as little-endian f32, offsets counted from the start of the data.

inline constexpr int kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const McmParams<float>& params);
McmParams<float> decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const McmParams<float>& params, const std::filesystem::path& path);
McmParams<float> load_checkpoint(const std::filesystem::path& path);

} // namespace palettekit::mcm
