#pragma once

#include "palettekit/tokens.hpp"

#include <filesystem>
#include <json.hpp>

namespace palettekit {

// Palette text format: a JSON array whose entries are either [L, a, b]
// triples or "#RRGGBB" strings. `null` entries denote masked slots and are
// only accepted by the masked variants.

MaskedPalette masked_palette_from_json(const nlohmann::json& j);
Palette palette_from_json(const nlohmann::json& j);
nlohmann::json palette_to_json(const Palette& p);

MaskedPalette read_masked_palette(const std::filesystem::path& path);
Palette read_palette(const std::filesystem::path& path);
void write_palette(const std::filesystem::path& path, const Palette& p);

std::string palette_to_hex_string(const Palette& p);

} // namespace palettekit
