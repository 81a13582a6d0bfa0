#include "palettekit/mcm/checkpoint.hpp"

#include "palettekit/binary_io.hpp"
#include "palettekit/error.hpp"

#include <cmath>
#include <cstring>
#include <json.hpp>

namespace palettekit::mcm {

namespace {
constexpr char kMagic[4] = {'M', 'C', 'M', '1'};
}

std::vector<std::uint8_t> encode_checkpoint(const McmParams<float>& params) {
    auto tensors = nlohmann::json::array();
    std::uint64_t offset = 0;
    for (const auto& [name, m] : params.tensors()) {
        tensors.push_back({{"name", name}, {"shape", {m->rows(), m->cols()}}, {"offset", offset}});
        offset += 4 * static_cast<std::uint64_t>(m->size());
    }
    const nlohmann::json header = {
        {"version", kCheckpointVersion}, {"config", to_json(params.config)}, {"tensors", tensors}};
    const std::string text = header.dump();

    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    binio::put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    out.reserve(out.size() + offset);
    for (const auto& [name, m] : params.tensors())
        for (Eigen::Index i = 0; i < m->size(); ++i) binio::put_f32(out, m->data()[i]);
    return out;
}

McmParams<float> decode_checkpoint(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        fail(ErrorKind::Format, "missing MCM1 magic");
    const std::uint32_t header_len = binio::get_u32(bytes, 4);
    if (bytes.size() < 8ull + header_len) fail(ErrorKind::Format, "truncated checkpoint header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + header_len);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Format, std::string("unreadable checkpoint header: ") + e.what());
    }
    if (!header.is_object() || !header.contains("version") || !header.contains("config") ||
        !header.contains("tensors"))
        fail(ErrorKind::Format, "checkpoint header lacks version/config/tensors");
    if (!header["version"].is_number_integer() || header["version"].get<int>() != kCheckpointVersion)
        fail(ErrorKind::Version, "unsupported checkpoint version " + header["version"].dump());

    McmParams<float> params = allocate_params<float>(config_from_json(header["config"]));
    const auto data = bytes.subspan(8 + header_len);
    const auto& entries = header["tensors"];
    auto tensors = params.tensors();
    if (!entries.is_array() || entries.size() != tensors.size())
        fail(ErrorKind::Format, "checkpoint tensor list does not match its config");
    try {
        for (std::size_t i = 0; i < tensors.size(); ++i) {
            auto& [name, m] = tensors[i];
            const auto& entry = entries[i];
            if (entry.at("name").get<std::string>() != name)
                fail(ErrorKind::Format, "expected tensor " + name + ", found " + entry.at("name").dump());
            const auto shape = entry.at("shape").get<std::vector<std::int64_t>>();
            if (shape.size() != 2 || shape[0] != m->rows() || shape[1] != m->cols())
                fail(ErrorKind::Format, "tensor " + name + " has the wrong shape");
            const auto offset = entry.at("offset").get<std::uint64_t>();
            const std::uint64_t len = 4 * static_cast<std::uint64_t>(m->size());
            if (offset + len > data.size()) fail(ErrorKind::Format, "truncated tensor data for " + name);
            for (Eigen::Index k = 0; k < m->size(); ++k) {
                const float v = binio::get_f32(data, offset + 4 * static_cast<std::size_t>(k));
                if (!std::isfinite(v)) fail(ErrorKind::Format, "non-finite value in tensor " + name);
                m->data()[k] = v;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Format, std::string("malformed tensor entry: ") + e.what());
    }
    return params;
}

void save_checkpoint(const McmParams<float>& params, const std::filesystem::path& path) {
    binio::write_file(path, encode_checkpoint(params));
}

McmParams<float> load_checkpoint(const std::filesystem::path& path) {
    return decode_checkpoint(binio::read_file(path));
}

} // namespace palettekit::mcm
