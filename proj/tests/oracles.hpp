#pragma once

// Independent reference implementations used to check the library. None of
// these call into the code they check beyond reading inputs.

#include "palettekit/color.hpp"
#include "palettekit/condition.hpp"
#include "palettekit/mcm/params.hpp"
#include "palettekit/tokens.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

using Vec3 = std::array<double, 3>;

// Lloyd's algorithm where every assignment step is a brute-force search over
// all k^n labelings for the cheapest one given the current centroids.
struct PartitionRun {
    double objective = 0.0;
    std::vector<double> history;
};
PartitionRun brute_force_lloyd(const std::vector<Vec3>& points, std::vector<Vec3> centroids, int max_iter);

// Lowest objective over every partition of the points into at most k
// non-empty groups.
double global_partition_optimum(const std::vector<Vec3>& points, int k);

// Minimum over all orderings (std::next_permutation) of the summed
// consecutive distances.
double min_path_length(std::vector<Vec3> colors);

// Closest distance to a polyline by sampling `per_segment` points per segment.
double sampled_polyline_distance(const Vec3& c, const std::vector<Vec3>& poly, int per_segment);

// Straight-line forward pass over plain nested vectors.
std::vector<std::vector<double>> forward_logits(const palettekit::mcm::McmParams<double>& params,
                                                const palettekit::TokenSequence& tokens,
                                                const palettekit::ConditionEmbedding* cond);

// Mean masked cross-entropy built on forward_logits.
double masked_loss(const palettekit::mcm::McmParams<double>& params, const palettekit::TokenSequence& tokens,
                   const std::vector<std::pair<int, int>>& targets, const palettekit::ConditionEmbedding* cond);

} // namespace oracle
