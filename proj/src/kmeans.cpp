#include "palettekit/kmeans.hpp"

#include "palettekit/error.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <tuple>

namespace palettekit {

namespace {

int nearest(const LabColor& p, std::span<const LabColor> centroids, double* best_d2) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    *best_d2 = best_d;
    return best;
}

double assign(std::span<const LabColor> points, std::span<const LabColor> centroids, std::vector<int>& out) {
    double objective = 0.0;
    out.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d2 = 0.0;
        out[i] = nearest(points[i], centroids, &d2);
        objective += d2;
    }
    return objective;
}

void update(std::span<const LabColor> points, std::span<const int> assignments, std::vector<LabColor>& centroids) {
    const std::size_t k = centroids.size();
    std::vector<std::array<double, 3>> sums(k, {0.0, 0.0, 0.0});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& s = sums[assignments[i]];
        s[0] += points[i].l();
        s[1] += points[i].a();
        s[2] += points[i].b();
        ++counts[assignments[i]];
    }
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            empty.push_back(c);
            continue;
        }
        const double n = static_cast<double>(counts[c]);
        centroids[c] = LabColor::clamped(sums[c][0] / n, sums[c][1] / n, sums[c][2] / n);
    }
    if (empty.empty()) return;

    // Reseed each empty cluster with the point farthest from its centroid,
    // never reusing a point.
    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centroids[assignments[i]]);
    for (std::size_t c : empty) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < points.size(); ++i)
            if (d2[i] > d2[far]) far = i;
        centroids[c] = points[far];
        d2[far] = -1.0;
    }
}

} // namespace

std::vector<LabColor> kmeans_plusplus_init(std::span<const LabColor> points, int k, Rng& rng) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be at least 1");
    if (points.size() < static_cast<std::size_t>(k))
        fail(ErrorKind::TooFewPoints,
             std::to_string(points.size()) + " points cannot form " + std::to_string(k) + " clusters");

    std::vector<LabColor> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.below(points.size())]);
    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centroids[0]);

    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = points.size() - 1;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            while (d2[pick] == 0.0) --pick; // rounding at the tail
        } else {
            pick = rng.below(points.size());
        }
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i)
            d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
    return centroids;
}

KmeansResult lloyd(std::span<const LabColor> points, std::vector<LabColor> centroids, int max_iter) {
    if (max_iter < 1) fail(ErrorKind::InvalidArgument, "max_iter must be at least 1");
    if (centroids.empty()) fail(ErrorKind::InvalidArgument, "no initial centroids");
    if (points.size() < centroids.size()) fail(ErrorKind::TooFewPoints, "fewer points than clusters");

    KmeansResult result;
    result.objective_history.push_back(assign(points, centroids, result.assignments));
    std::vector<int> next;
    for (int iter = 1; iter <= max_iter; ++iter) {
        update(points, result.assignments, centroids);
        const double objective = assign(points, centroids, next);
        result.objective_history.push_back(objective);
        result.iterations = iter;
        const bool stable = next == result.assignments;
        result.assignments.swap(next);
        if (stable) break;
    }
    result.centroids = std::move(centroids);
    result.objective = result.objective_history.back();
    return result;
}

KmeansResult kmeans_lab(std::span<const LabColor> points, int k, int max_iter, std::uint64_t seed) {
    Rng rng(seed);
    auto init = kmeans_plusplus_init(points, k, rng);
    return lloyd(points, std::move(init), max_iter);
}

Palette extract_palette(const ImageBuffer& img, int k, std::uint64_t seed, const ExtractOptions& opts) {
    if (k < 1 || k > static_cast<int>(Palette::kMaxColors))
        fail(ErrorKind::InvalidArgument, "palette size must be in [1, 8]");

    const auto pixels = img.pixels();
    std::size_t stride = 1;
    if (opts.max_samples > 0 && pixels.size() > opts.max_samples)
        stride = (pixels.size() + opts.max_samples - 1) / opts.max_samples;

    std::vector<LabColor> points;
    points.reserve(pixels.size() / stride + 1);
    std::map<std::tuple<int, int, int>, LabColor> lab_cache;
    for (std::size_t i = 0; i < pixels.size(); i += stride) {
        const auto& p = pixels[i];
        auto [it, inserted] = lab_cache.try_emplace({p.r, p.g, p.b});
        if (inserted) it->second = srgb_to_lab(p);
        points.push_back(it->second);
    }

    // Fewer distinct samples than k: cluster at the distinct count instead.
    const int effective_k = std::min<int>(k, static_cast<int>(lab_cache.size()));
    const auto km = kmeans_lab(points, effective_k, opts.max_iter, seed);

    std::vector<std::pair<LabColor, std::size_t>> clusters;
    for (std::size_t c = 0; c < km.centroids.size(); ++c) {
        const auto population = static_cast<std::size_t>(
            std::count(km.assignments.begin(), km.assignments.end(), static_cast<int>(c)));
        if (population == 0) continue;
        auto same = std::find_if(clusters.begin(), clusters.end(),
                                 [&](const auto& e) { return e.first == km.centroids[c]; });
        if (same != clusters.end())
            same->second += population;
        else
            clusters.emplace_back(km.centroids[c], population);
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first.as_array() < y.first.as_array();
    });

    std::vector<LabColor> colors;
    for (const auto& [c, n] : clusters) colors.push_back(c);
    return Palette(std::move(colors));
}

} // namespace palettekit
