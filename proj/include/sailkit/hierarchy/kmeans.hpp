#pragma once

#include <cstddef>
#include <vector>

#include "sailkit/core/rng.hpp"

namespace sailkit {

struct KMeansResult {
    std::size_t k = 0;
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> assignment; // per point, nearest centroid
    double inertia = 0.0;                // sum of squared distances
};

// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs by
// inertia. Converges when assignments stop changing or after 100
// iterations.
KMeansResult kmeans(const std::vector<std::vector<double>>& points,
                    std::size_t k, std::size_t restarts, Rng& rng);

} // namespace sailkit
