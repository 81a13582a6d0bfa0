#pragma once

#include "palettekit/color.hpp"

#include <filesystem>
#include <vector>

namespace palettekit {

/// Row-major 8-bit sRGB image.
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, SrgbColor fill = {});
    ImageBuffer(int width, int height, std::vector<SrgbColor> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    const SrgbColor& at(int x, int y) const { return pixels_[index(x, y)]; }
    SrgbColor& at(int x, int y) { return pixels_[index(x, y)]; }
    std::span<const SrgbColor> pixels() const noexcept { return pixels_; }
    std::span<SrgbColor> pixels() noexcept { return pixels_; }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_ = 0;
    int height_ = 0;
    std::vector<SrgbColor> pixels_;
};

/// Decodes PNG or JPEG (sniffed from the file header). Alpha is composited
/// over white.
ImageBuffer load_image(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const ImageBuffer& img);

/// Luma Y = round(0.299 r + 0.587 g + 0.114 b) on all three channels.
ImageBuffer to_grayscale(const ImageBuffer& img);

} // namespace palettekit
