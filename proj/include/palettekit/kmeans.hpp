#pragma once

#include "palettekit/color.hpp"
#include "palettekit/image.hpp"
#include "palettekit/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace palettekit {

struct KmeansResult {
    std::vector<LabColor> centroids;
    std::vector<int> assignments;
    double objective = 0.0; // sum of squared distances to assigned centroids
    int iterations = 0;
    /// Objective after every assignment step, starting with the one made
    /// against the initial centroids. Non-increasing.
    std::vector<double> objective_history;
};

/// k-means++ seeding. Picks the first centroid uniformly, the rest with
/// probability proportional to squared distance to the nearest chosen one.
std::vector<LabColor> kmeans_plusplus_init(std::span<const LabColor> points, int k, Rng& rng);

/// Lloyd iterations from the given centroids. Stops once assignments repeat
/// or after max_iter centroid updates. An empty cluster is moved onto the
/// point that lies farthest from its own centroid.
KmeansResult lloyd(std::span<const LabColor> points, std::vector<LabColor> centroids, int max_iter);

KmeansResult kmeans_lab(std::span<const LabColor> points, int k, int max_iter, std::uint64_t seed);

struct ExtractOptions {
    int max_iter = 100;
    std::size_t max_samples = 65536; // 0 disables subsampling
};

/// k-color palette via k-means in CIELAB, ordered by descending cluster
/// population (ties: ascending L, then a, then b). Identical centroids are
/// merged, so fewer than k colors come back when the image has fewer than k
/// distinct colors.
Palette extract_palette(const ImageBuffer& img, int k, std::uint64_t seed, const ExtractOptions& opts = {});

} // namespace palettekit
