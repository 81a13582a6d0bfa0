#include "palettekit/palette_json.hpp"

#include "palettekit/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace palettekit {

MaskedPalette masked_palette_from_json(const nlohmann::json& j) {
    if (!j.is_array()) fail(ErrorKind::Parse, "palette must be a JSON array");
    MaskedPalette out;
    for (const auto& entry : j) {
        if (entry.is_null()) {
            out.emplace_back(std::nullopt);
        } else if (entry.is_string()) {
            out.emplace_back(srgb_to_lab(parse_hex(entry.get<std::string>())));
        } else if (entry.is_array() && entry.size() == 3 &&
                   std::all_of(entry.begin(), entry.end(), [](const auto& v) { return v.is_number(); })) {
            out.emplace_back(LabColor(entry[0].get<double>(), entry[1].get<double>(), entry[2].get<double>()));
        } else {
            fail(ErrorKind::Parse, "palette entry must be [L,a,b], \"#RRGGBB\" or null, got " + entry.dump());
        }
    }
    if (out.empty() || out.size() > Palette::kMaxColors)
        fail(ErrorKind::Parse, "palette must hold 1..8 entries");
    return out;
}

Palette palette_from_json(const nlohmann::json& j) {
    std::vector<LabColor> colors;
    for (const auto& slot : masked_palette_from_json(j)) {
        if (!slot) fail(ErrorKind::Parse, "unexpected null slot in a full palette");
        colors.push_back(*slot);
    }
    return Palette(std::move(colors));
}

nlohmann::json palette_to_json(const Palette& p) {
    auto arr = nlohmann::json::array();
    for (const auto& c : p) arr.push_back({c.l(), c.a(), c.b()});
    return arr;
}

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

} // namespace

MaskedPalette read_masked_palette(const std::filesystem::path& path) {
    return masked_palette_from_json(read_json(path));
}

Palette read_palette(const std::filesystem::path& path) { return palette_from_json(read_json(path)); }

void write_palette(const std::filesystem::path& path, const Palette& p) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << palette_to_json(p).dump() << '\n';
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

std::string palette_to_hex_string(const Palette& p) {
    std::ostringstream os;
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << to_hex(lab_to_srgb(p[i]));
    return os.str();
}

} // namespace palettekit
