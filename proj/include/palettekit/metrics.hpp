#pragma once

#include "palettekit/color.hpp"
#include "palettekit/image.hpp"

#include <span>
#include <vector>

namespace palettekit {

// ---------------------------------------------------------------------------
// Palette similarity (dynamic closest color warping)

/// Reorders colors along the shortest Hamiltonian path in CIELAB, found by
/// exhaustive search. Among equally short paths the lexicographically first
/// permutation wins; the result is then oriented so the endpoint with the
/// smaller L comes first. Throws PaletteTooLarge beyond 8 colors.
Palette sort_palette_min_path(const Palette& p);

/// Total consecutive Euclidean distance along the palette order.
double path_length(std::span<const LabColor> colors);

/// Exact distance from c to the polyline through poly (a single point when
/// poly has one element).
double closest_point_to_polyline(const LabColor& c, std::span<const LabColor> poly);

/// Sum over each palette's colors of the distance to the other palette's
/// min-path polyline. Symmetric and order invariant.
double dccw(const Palette& pa, const Palette& pb);

// ---------------------------------------------------------------------------
// Color histograms

class Histogram3D {
public:
    Histogram3D(int bins_per_axis, std::vector<double> counts, bool normalized);

    int bins_per_axis() const noexcept { return bins_; }
    bool normalized() const noexcept { return normalized_; }
    std::span<const double> counts() const noexcept { return counts_; }
    double at(int r, int g, int b) const { return counts_[(r * bins_ + g) * bins_ + b]; }

private:
    int bins_;
    std::vector<double> counts_;
    bool normalized_;
};

/// Normalized histogram over a uniform partition of the RGB cube.
Histogram3D color_histogram(const ImageBuffer& img, int bins_per_axis = 8);

/// sqrt(1 - BC) with BC the Bhattacharyya coefficient; lies in [0, 1].
double bhattacharyya_distance(const Histogram3D& p, const Histogram3D& q);

// ---------------------------------------------------------------------------
// Image fidelity

/// 10 log10(255^2 / MSE) over all channels; +infinity for identical images.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

/// Mean SSIM on luma over all fully contained 11x11 Gaussian windows
/// (sigma 1.5, K1 0.01, K2 0.03, L 255).
double ssim(const ImageBuffer& a, const ImageBuffer& b);

// ---------------------------------------------------------------------------

double accuracy_at_1(std::span<const ColorCode> predicted, std::span<const ColorCode> target);

struct MetricsRecord {
    double hist_bha = 0.0;
    double dccw = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
};

} // namespace palettekit
