#include "palettekit/image.hpp"

#include "palettekit/error.hpp"

#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace palettekit {

ImageBuffer::ImageBuffer(int width, int height, SrgbColor fill)
    : ImageBuffer(width, height,
                  std::vector<SrgbColor>(width > 0 && height > 0 ? static_cast<std::size_t>(width) * height : 0,
                                         fill)) {}

ImageBuffer::ImageBuffer(int width, int height, std::vector<SrgbColor> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) fail(ErrorKind::InvalidArgument, "image dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
        fail(ErrorKind::ShapeMismatch, "pixel count does not match width*height");
}

namespace {

std::uint8_t over_white(std::uint8_t c, std::uint8_t alpha) {
    return static_cast<std::uint8_t>(std::lround((c * alpha + 255.0 * (255 - alpha)) / 255.0));
}

ImageBuffer load_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        fail(ErrorKind::Decode, path.string() + ": " + image.message);
    image.format = PNG_FORMAT_RGBA;
    std::vector<png_byte> rgba(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
        png_image_free(&image);
        fail(ErrorKind::Decode, path.string() + ": " + image.message);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    std::vector<SrgbColor> pixels(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const png_byte* p = &rgba[4 * i];
        pixels[i] = {over_white(p[0], p[3]), over_white(p[1], p[3]), over_white(p[2], p[3])};
    }
    return ImageBuffer(w, h, std::move(pixels));
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

ImageBuffer load_jpeg(const std::filesystem::path& path) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "rb"), &std::fclose);
    if (!file) fail(ErrorKind::Io, "cannot open " + path.string());

    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    // Locals touched after setjmp must not live in registers.
    std::vector<SrgbColor> pixels;
    volatile int w = 0;
    volatile int h = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        fail(ErrorKind::Decode, path.string() + ": " + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    w = static_cast<int>(cinfo.output_width);
    h = static_cast<int>(cinfo.output_height);
    pixels.resize(static_cast<std::size_t>(w) * h);
    std::vector<JSAMPLE> row(static_cast<std::size_t>(w) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW rows[1] = {row.data()};
        const auto y = cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, rows, 1);
        for (int x = 0; x < w; ++x)
            pixels[static_cast<std::size_t>(y) * w + x] = {row[3 * x], row[3 * x + 1], row[3 * x + 2]};
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return ImageBuffer(w, h, std::move(pixels));
}

} // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::array<unsigned char, 8> magic{};
    in.read(reinterpret_cast<char*>(magic.data()), magic.size());
    const auto got = in.gcount();
    in.close();

    static constexpr std::array<unsigned char, 8> kPngMagic{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (got == 8 && magic == kPngMagic) return load_png(path);
    if (got >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) return load_jpeg(path);
    fail(ErrorKind::Decode, path.string() + ": not a PNG or JPEG file");
}

void save_png(const std::filesystem::path& path, const ImageBuffer& img) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    std::vector<png_byte> rgb;
    rgb.reserve(img.size() * 3);
    for (const auto& p : img.pixels()) {
        rgb.push_back(p.r);
        rgb.push_back(p.g);
        rgb.push_back(p.b);
    }
    if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr))
        fail(ErrorKind::Io, path.string() + ": " + image.message);
}

ImageBuffer to_grayscale(const ImageBuffer& img) {
    ImageBuffer out = img;
    for (auto& p : out.pixels()) {
        const auto y = static_cast<std::uint8_t>(std::lround(0.299 * p.r + 0.587 * p.g + 0.114 * p.b));
        p = {y, y, y};
    }
    return out;
}

} // namespace palettekit
