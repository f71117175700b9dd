#include "sailkit/hierarchy/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "sailkit/simd/kernels.hpp"

namespace sailkit {

namespace {

std::size_t nearest_centroid(const std::vector<double>& p,
                             const std::vector<std::vector<double>>& centroids,
                             double* dist_out = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = simd::sqdist(p.data(), centroids[c].data(), p.size());
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (dist_out) *dist_out = best_d;
    return best;
}

KMeansResult lloyd_once(const std::vector<std::vector<double>>& points,
                        std::size_t k, Rng& rng) {
    const std::size_t n = points.size();
    const std::size_t d = points[0].size();

    // k-means++ seeding.
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.index(n)]);
    std::vector<double> d2(n);
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) {
                best = std::min(best, simd::sqdist(points[i].data(), c.data(), d));
            }
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // All remaining mass on existing centroids; duplicate a point.
            centroids.push_back(points[rng.index(n)]);
            continue;
        }
        double target = rng.uniform(0.0, total);
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            target -= d2[i];
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        centroids.push_back(points[pick]);
    }

    KMeansResult res;
    res.k = k;
    res.assignment.assign(n, 0);
    for (std::size_t iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = nearest_centroid(points[i], centroids);
            if (c != res.assignment[i]) {
                res.assignment[i] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[res.assignment[i]];
            for (std::size_t j = 0; j < d; ++j) sums[res.assignment[i]][j] += points[i][j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster on the point farthest from its centroid.
                double worst = -1.0;
                std::size_t worst_i = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dd = simd::sqdist(points[i].data(),
                                                   centroids[res.assignment[i]].data(), d);
                    if (dd > worst) {
                        worst = dd;
                        worst_i = i;
                    }
                }
                centroids[c] = points[worst_i];
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
        if (!changed) break;
    }

    // Final tightening pass so assignment is nearest-centroid.
    res.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dist = 0.0;
        res.assignment[i] = nearest_centroid(points[i], centroids, &dist);
        res.inertia += dist;
    }
    res.centroids = std::move(centroids);
    return res;
}

} // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points,
                    std::size_t k, std::size_t restarts, Rng& rng) {
    if (k < 1 || points.size() < k) {
        throw std::invalid_argument("kmeans: need at least k points");
    }
    KMeansResult best;
    for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
        Rng run_rng = rng.split(r);
        KMeansResult res = lloyd_once(points, k, run_rng);
        if (r == 0 || res.inertia < best.inertia) best = std::move(res);
    }
    return best;
}

} // namespace sailkit
