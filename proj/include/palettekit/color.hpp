#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace palettekit {

struct SrgbColor {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const SrgbColor&, const SrgbColor&) = default;
};

/// CIELAB point. L in [0, 100]; a and b in [-128, 128).
///
/// The constructor rejects out-of-range or non-finite components with
/// ErrorKind::InvalidColor; use LabColor::clamped() to saturate instead.
class LabColor {
public:
    static constexpr double kMinL = 0.0;
    static constexpr double kMaxL = 100.0;
    static constexpr double kMinAB = -128.0;
    static constexpr double kMaxAB = 128.0; // exclusive

    LabColor() = default;
    LabColor(double l, double a, double b);

    static LabColor clamped(double l, double a, double b);
    static bool in_range(double l, double a, double b) noexcept;

    double l() const noexcept { return l_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::array<double, 3> as_array() const noexcept { return {l_, a_, b_}; }

    friend bool operator==(const LabColor&, const LabColor&) = default;

private:
    double l_ = 0.0;
    double a_ = 0.0;
    double b_ = 0.0;
};

double distance(const LabColor& x, const LabColor& y) noexcept;
double squared_distance(const LabColor& x, const LabColor& y) noexcept;

// D65 / 2 degree observer, CIE 1976.
LabColor srgb_to_lab(SrgbColor c) noexcept;
SrgbColor lab_to_srgb(const LabColor& c) noexcept;

/// Index of a 16x16x16 CIELAB bin.
class ColorCode {
public:
    static constexpr int kBinsPerAxis = 16;
    static constexpr int kCount = kBinsPerAxis * kBinsPerAxis * kBinsPerAxis;

    ColorCode() = default;
    explicit ColorCode(int code);
    static ColorCode from_bins(int il, int ia, int ib);

    int value() const noexcept { return code_; }
    int l_bin() const noexcept { return code_ / 256; }
    int a_bin() const noexcept { return (code_ / 16) % 16; }
    int b_bin() const noexcept { return code_ % 16; }

    friend auto operator<=>(const ColorCode&, const ColorCode&) = default;

private:
    int code_ = 0;
};

ColorCode quantize(const LabColor& c) noexcept;
LabColor dequantize(ColorCode code) noexcept;

/// Ordered list of 1..8 colors.
class Palette {
public:
    static constexpr std::size_t kMaxColors = 8;

    Palette() = default; // empty; only valid as a placeholder
    explicit Palette(std::vector<LabColor> colors);
    Palette(std::initializer_list<LabColor> colors);

    std::size_t size() const noexcept { return colors_.size(); }
    bool empty() const noexcept { return colors_.empty(); }
    const LabColor& operator[](std::size_t i) const { return colors_[i]; }
    std::span<const LabColor> colors() const noexcept { return colors_; }
    auto begin() const noexcept { return colors_.begin(); }
    auto end() const noexcept { return colors_.end(); }

    friend bool operator==(const Palette&, const Palette&) = default;

private:
    std::vector<LabColor> colors_;
};

std::string to_hex(SrgbColor c);
SrgbColor parse_hex(std::string_view hex);

} // namespace palettekit
