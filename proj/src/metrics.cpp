#include "palettekit/metrics.hpp"

#include "palettekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace palettekit {

double path_length(std::span<const LabColor> colors) {
    if (colors.size() < 2) return 0.0;
    // Summing sorted segment lengths makes the total independent of the
    // direction of travel, so a path and its reverse compare equal.
    std::vector<double> segments;
    segments.reserve(colors.size() - 1);
    for (std::size_t i = 1; i < colors.size(); ++i) segments.push_back(distance(colors[i - 1], colors[i]));
    std::sort(segments.begin(), segments.end());
    return std::accumulate(segments.begin(), segments.end(), 0.0);
}

Palette sort_palette_min_path(const Palette& p) {
    const std::size_t n = p.size();
    if (n > Palette::kMaxColors) fail(ErrorKind::PaletteTooLarge, "min-path sort supports at most 8 colors");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> best = perm;
    double best_len = std::numeric_limits<double>::infinity();
    std::vector<LabColor> ordered(n);
    do {
        for (std::size_t i = 0; i < n; ++i) ordered[i] = p[perm[i]];
        const double len = path_length(ordered);
        if (len < best_len) {
            best_len = len;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (std::size_t i = 0; i < n; ++i) ordered[i] = p[best[i]];
    if (ordered.back().l() < ordered.front().l()) std::reverse(ordered.begin(), ordered.end());
    return Palette(std::move(ordered));
}

double closest_point_to_polyline(const LabColor& c, std::span<const LabColor> poly) {
    if (poly.empty()) fail(ErrorKind::InvalidArgument, "polyline must hold at least one point");
    if (poly.size() == 1) return distance(c, poly[0]);

    const auto p = c.as_array();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < poly.size(); ++s) {
        const auto a = poly[s - 1].as_array();
        const auto b = poly[s].as_array();
        double ab2 = 0.0;
        double ap_ab = 0.0;
        for (int i = 0; i < 3; ++i) {
            ab2 += (b[i] - a[i]) * (b[i] - a[i]);
            ap_ab += (p[i] - a[i]) * (b[i] - a[i]);
        }
        const double t = ab2 > 0.0 ? std::clamp(ap_ab / ab2, 0.0, 1.0) : 0.0;
        double d2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double q = a[i] + t * (b[i] - a[i]);
            d2 += (p[i] - q) * (p[i] - q);
        }
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

double dccw(const Palette& pa, const Palette& pb) {
    if (pa.empty() || pb.empty()) fail(ErrorKind::InvalidArgument, "dccw needs non-empty palettes");
    const Palette sa = sort_palette_min_path(pa);
    const Palette sb = sort_palette_min_path(pb);
    double total = 0.0;
    for (const auto& c : sa) total += closest_point_to_polyline(c, sb.colors());
    for (const auto& c : sb) total += closest_point_to_polyline(c, sa.colors());
    return total;
}

Histogram3D::Histogram3D(int bins_per_axis, std::vector<double> counts, bool normalized)
    : bins_(bins_per_axis), counts_(std::move(counts)), normalized_(normalized) {
    if (bins_ < 2 || bins_ > 32) fail(ErrorKind::InvalidArgument, "bins per axis must be in [2, 32]");
    if (counts_.size() != static_cast<std::size_t>(bins_) * bins_ * bins_)
        fail(ErrorKind::ShapeMismatch, "histogram needs bins^3 counts");
    if (std::any_of(counts_.begin(), counts_.end(), [](double v) { return !(v >= 0.0); }))
        fail(ErrorKind::InvalidArgument, "histogram counts must be non-negative");
}

Histogram3D color_histogram(const ImageBuffer& img, int bins_per_axis) {
    if (bins_per_axis < 2 || bins_per_axis > 32) fail(ErrorKind::InvalidArgument, "bins per axis must be in [2, 32]");
    const int n = bins_per_axis;
    std::vector<double> counts(static_cast<std::size_t>(n) * n * n, 0.0);
    for (const auto& p : img.pixels()) {
        const int r = p.r * n / 256;
        const int g = p.g * n / 256;
        const int b = p.b * n / 256;
        counts[(r * n + g) * n + b] += 1.0;
    }
    const double total = static_cast<double>(img.size());
    for (double& v : counts) v /= total;
    return Histogram3D(n, std::move(counts), true);
}

double bhattacharyya_distance(const Histogram3D& p, const Histogram3D& q) {
    if (p.bins_per_axis() != q.bins_per_axis())
        fail(ErrorKind::ShapeMismatch, "histograms use different bin counts");
    if (!p.normalized() || !q.normalized()) fail(ErrorKind::InvalidArgument, "histograms must be normalized");
    double bc = 0.0;
    const auto pc = p.counts();
    const auto qc = q.counts();
    for (std::size_t i = 0; i < pc.size(); ++i) bc += std::sqrt(pc[i] * qc[i]);
    return std::sqrt(1.0 - std::min(bc, 1.0));
}

namespace {

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width() != b.width() || a.height() != b.height())
        fail(ErrorKind::ShapeMismatch, "images differ in size: " + std::to_string(a.width()) + "x" +
                                           std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                           std::to_string(b.height()));
}

std::vector<double> luma(const ImageBuffer& img) {
    std::vector<double> y;
    y.reserve(img.size());
    for (const auto& p : img.pixels()) y.push_back(0.299 * p.r + 0.587 * p.g + 0.114 * p.b);
    return y;
}

} // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b);
    double sse = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double dr = double(pa[i].r) - pb[i].r;
        const double dg = double(pa[i].g) - pb[i].g;
        const double db = double(pa[i].b) - pb[i].b;
        sse += dr * dr + dg * dg + db * db;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / (3.0 * static_cast<double>(pa.size()));
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b);
    constexpr int kWin = 11;
    constexpr double kSigma = 1.5;
    if (a.width() < kWin || a.height() < kWin) fail(ErrorKind::ImageTooSmall, "SSIM needs both sides >= 11");

    double kernel[kWin];
    double ksum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - kWin / 2;
        kernel[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        ksum += kernel[i];
    }
    for (double& k : kernel) k /= ksum;

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    const int w = a.width();
    const int h = a.height();
    const auto x = luma(a);
    const auto y = luma(b);

    // Separable filtering: horizontal pass over valid columns, then vertical.
    const int ow = w - kWin + 1;
    const int oh = h - kWin + 1;
    auto filter = [&](auto&& value) {
        std::vector<double> horiz(static_cast<std::size_t>(h) * ow);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < ow; ++c) {
                double s = 0.0;
                for (int k = 0; k < kWin; ++k) s += kernel[k] * value(static_cast<std::size_t>(r) * w + c + k);
                horiz[static_cast<std::size_t>(r) * ow + c] = s;
            }
        std::vector<double> out(static_cast<std::size_t>(oh) * ow);
        for (int r = 0; r < oh; ++r)
            for (int c = 0; c < ow; ++c) {
                double s = 0.0;
                for (int k = 0; k < kWin; ++k) s += kernel[k] * horiz[static_cast<std::size_t>(r + k) * ow + c];
                out[static_cast<std::size_t>(r) * ow + c] = s;
            }
        return out;
    };
    const auto mu_x = filter([&](std::size_t i) { return x[i]; });
    const auto mu_y = filter([&](std::size_t i) { return y[i]; });
    const auto xx = filter([&](std::size_t i) { return x[i] * x[i]; });
    const auto yy = filter([&](std::size_t i) { return y[i] * y[i]; });
    const auto xy = filter([&](std::size_t i) { return x[i] * y[i]; });

    double total = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mx = mu_x[i];
        const double my = mu_y[i];
        const double vx = xx[i] - mx * mx;
        const double vy = yy[i] - my * my;
        const double cov = xy[i] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mu_x.size());
}

double accuracy_at_1(std::span<const ColorCode> predicted, std::span<const ColorCode> target) {
    if (predicted.size() != target.size())
        fail(ErrorKind::ShapeMismatch, "prediction and target lengths differ");
    if (predicted.empty()) fail(ErrorKind::ShapeMismatch, "accuracy needs at least one position");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == target[i];
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

} // namespace palettekit
