#pragma once

#include "palettekit/color.hpp"
#include "palettekit/dataset.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace palettekit {

using Point3 = std::array<double, 3>;
using Point2 = std::array<double, 2>;

struct PcaResult {
    std::vector<Point2> coords;
    Point3 mean{};
    std::array<Point3, 3> axes{}; // principal directions, by decreasing variance
    Point3 variances{};
};

/// Principal components of the mean-centered points. Each axis is signed so
/// its largest-magnitude component is positive.
PcaResult pca(std::span<const Point3> points);

struct TsneOptions {
    double perplexity = 30.0;
    int iterations = 1000;
    std::uint64_t seed = 0;
};

/// Exact (O(N^2)) t-SNE into two dimensions. Perplexity is reduced to
/// (N - 1) / 3 when the point set is too small for the requested value.
std::vector<Point2> tsne(std::span<const Point3> points, const TsneOptions& opts);

enum class ProjectionMethod { Pca, Tsne };
ProjectionMethod projection_method_from_string(std::string_view s);

struct ProjectedColor {
    double x = 0.0;
    double y = 0.0;
    LabColor color;    // mean of the palette colors sharing this code
    std::size_t frequency = 0;
};

inline constexpr std::size_t kMaxTsneColors = 20000;

/// One point per distinct quantized palette color, ordered by code.
/// Throws TooManyPoints when t-SNE would see more than 20,000 palette colors.
std::vector<ProjectedColor> project_colors_2d(const std::vector<ManifestRecord>& records, ProjectionMethod method,
                                              std::uint64_t seed);

void write_projection_csv(const std::filesystem::path& path, std::span<const ProjectedColor> points);
/// Scatter plot; fill is the point's sRGB color, radius grows with
/// sqrt(frequency).
void write_projection_svg(const std::filesystem::path& path, std::span<const ProjectedColor> points);

} // namespace palettekit
