#include "palettekit/color.hpp"

#include "palettekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace palettekit {

namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_decode(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double srgb_encode(double v) {
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

std::uint8_t to_channel(double v) {
    const double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
    return static_cast<std::uint8_t>(scaled);
}

const double kMaxABBelow = std::nextafter(LabColor::kMaxAB, 0.0);

} // namespace

bool LabColor::in_range(double l, double a, double b) noexcept {
    return std::isfinite(l) && std::isfinite(a) && std::isfinite(b) && l >= kMinL && l <= kMaxL &&
           a >= kMinAB && a < kMaxAB && b >= kMinAB && b < kMaxAB;
}

LabColor::LabColor(double l, double a, double b) : l_(l), a_(a), b_(b) {
    if (!in_range(l, a, b)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "Lab (%g, %g, %g) outside L in [0,100], a/b in [-128,128)", l, a, b);
        fail(ErrorKind::InvalidColor, buf);
    }
}

LabColor LabColor::clamped(double l, double a, double b) {
    if (!std::isfinite(l) || !std::isfinite(a) || !std::isfinite(b))
        fail(ErrorKind::InvalidColor, "non-finite Lab component");
    return LabColor(std::clamp(l, kMinL, kMaxL), std::clamp(a, kMinAB, kMaxABBelow),
                    std::clamp(b, kMinAB, kMaxABBelow));
}

double squared_distance(const LabColor& x, const LabColor& y) noexcept {
    const double dl = x.l() - y.l();
    const double da = x.a() - y.a();
    const double db = x.b() - y.b();
    return dl * dl + da * da + db * db;
}

double distance(const LabColor& x, const LabColor& y) noexcept {
    return std::sqrt(squared_distance(x, y));
}

LabColor srgb_to_lab(SrgbColor c) noexcept {
    const double r = srgb_decode(c.r / 255.0);
    const double g = srgb_decode(c.g / 255.0);
    const double b = srgb_decode(c.b / 255.0);

    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);

    return LabColor::clamped(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz));
}

SrgbColor lab_to_srgb(const LabColor& c) noexcept {
    const double fy = (c.l() + 16.0) / 116.0;
    const double fx = fy + c.a() / 500.0;
    const double fz = fy - c.b() / 200.0;

    const double x = kWhiteX * lab_f_inv(fx);
    const double y = c.l() > kKappa * kEpsilon ? fy * fy * fy : c.l() / kKappa;
    const double z = kWhiteZ * lab_f_inv(fz);

    const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;

    return {to_channel(srgb_encode(std::max(r, 0.0))), to_channel(srgb_encode(std::max(g, 0.0))),
            to_channel(srgb_encode(std::max(b, 0.0)))};
}

ColorCode::ColorCode(int code) : code_(code) {
    if (code < 0 || code >= kCount)
        fail(ErrorKind::InvalidArgument, "color code " + std::to_string(code) + " outside [0, 4095]");
}

ColorCode ColorCode::from_bins(int il, int ia, int ib) {
    auto check = [](int v) {
        if (v < 0 || v >= kBinsPerAxis) fail(ErrorKind::InvalidArgument, "bin index outside [0, 15]");
    };
    check(il);
    check(ia);
    check(ib);
    return ColorCode(il * 256 + ia * 16 + ib);
}

ColorCode quantize(const LabColor& c) noexcept {
    constexpr int n = ColorCode::kBinsPerAxis;
    const int il = std::min(static_cast<int>(std::floor(c.l() / 100.0 * n)), n - 1);
    const int ia = std::min(static_cast<int>(std::floor((c.a() + 128.0) / 256.0 * n)), n - 1);
    const int ib = std::min(static_cast<int>(std::floor((c.b() + 128.0) / 256.0 * n)), n - 1);
    return ColorCode::from_bins(il, ia, ib);
}

LabColor dequantize(ColorCode code) noexcept {
    constexpr double n = ColorCode::kBinsPerAxis;
    return LabColor((code.l_bin() + 0.5) * 100.0 / n, (code.a_bin() + 0.5) * 256.0 / n - 128.0,
                    (code.b_bin() + 0.5) * 256.0 / n - 128.0);
}

Palette::Palette(std::vector<LabColor> colors) : colors_(std::move(colors)) {
    if (colors_.empty()) fail(ErrorKind::InvalidArgument, "palette must hold at least one color");
    if (colors_.size() > kMaxColors)
        fail(ErrorKind::PaletteTooLarge,
             "palette holds " + std::to_string(colors_.size()) + " colors, maximum is 8");
}

Palette::Palette(std::initializer_list<LabColor> colors) : Palette(std::vector<LabColor>(colors)) {}

std::string to_hex(SrgbColor c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
    return buf;
}

SrgbColor parse_hex(std::string_view hex) {
    auto nibble = [&](char ch) -> int {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
        fail(ErrorKind::Parse, "invalid hex color '" + std::string(hex) + "'");
    };
    if (hex.size() != 7 || hex[0] != '#') fail(ErrorKind::Parse, "expected #RRGGBB, got '" + std::string(hex) + "'");
    auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])); };
    return {byte(1), byte(3), byte(5)};
}

} // namespace palettekit
