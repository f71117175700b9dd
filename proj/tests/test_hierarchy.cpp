#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sailkit/hierarchy/hierarchy.hpp"
#include "sailkit/hierarchy/kmeans.hpp"
#include "sailkit/hierarchy/pca.hpp"

using namespace sailkit;

TEST_CASE("kmeans") {
    SUBCASE("k equals the number of points: zero inertia") {
        std::vector<std::vector<double>> pts{{0.0}, {5.0}, {9.0}};
        Rng rng(3);
        const KMeansResult r = kmeans(pts, 3, 4, rng);
        CHECK(r.inertia == doctest::Approx(0.0));
        std::set<std::size_t> used(r.assignment.begin(), r.assignment.end());
        CHECK(used.size() == 3);
    }

    SUBCASE("two well-separated clusters") {
        std::vector<std::vector<double>> pts{{0.0}, {1.0}, {10.0}, {11.0}};
        Rng rng(5);
        const KMeansResult r = kmeans(pts, 2, 8, rng);
        CHECK(r.assignment[0] == r.assignment[1]);
        CHECK(r.assignment[2] == r.assignment[3]);
        CHECK(r.assignment[0] != r.assignment[2]);
        // Centroids at cluster means {0.5, 10.5}; inertia = 4 * 0.25.
        CHECK(r.inertia == doctest::Approx(1.0).epsilon(1e-10));
        std::vector<double> cs{r.centroids[0][0], r.centroids[1][0]};
        std::sort(cs.begin(), cs.end());
        CHECK(cs[0] == doctest::Approx(0.5));
        CHECK(cs[1] == doctest::Approx(10.5));
    }

    SUBCASE("identical points collapse cleanly") {
        std::vector<std::vector<double>> pts(6, std::vector<double>{2.0, 2.0});
        Rng rng(7);
        const KMeansResult r = kmeans(pts, 3, 2, rng);
        CHECK(r.inertia == doctest::Approx(0.0));
    }

    SUBCASE("beats a random assignment on random data") {
        Rng rng(11);
        std::vector<std::vector<double>> pts(120, std::vector<double>(3));
        for (auto& p : pts) {
            for (double& v : p) v = rng.uniform(-1.0, 1.0);
        }
        const std::size_t k = 5;
        const KMeansResult r = kmeans(pts, k, 6, rng);

        // Oracle: inertia of a random assignment with matched cluster means.
        std::vector<std::size_t> rand_assign(pts.size());
        for (auto& a : rand_assign) a = rng.index(k);
        std::vector<std::vector<double>> means(k, std::vector<double>(3, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            counts[rand_assign[i]]++;
            for (std::size_t d = 0; d < 3; ++d) means[rand_assign[i]][d] += pts[i][d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (double& v : means[c]) v /= static_cast<double>(counts[c]);
        }
        double rand_inertia = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t d = 0; d < 3; ++d) {
                const double diff = pts[i][d] - means[rand_assign[i]][d];
                rand_inertia += diff * diff;
            }
        }
        CHECK(r.inertia < rand_inertia);

        // Assignment invariant: each point sits with its nearest centroid.
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double own = 0.0;
            for (std::size_t d = 0; d < 3; ++d) {
                const double diff = pts[i][d] - r.centroids[r.assignment[i]][d];
                own += diff * diff;
            }
            for (std::size_t c = 0; c < k; ++c) {
                double alt = 0.0;
                for (std::size_t d = 0; d < 3; ++d) {
                    const double diff = pts[i][d] - r.centroids[c][d];
                    alt += diff * diff;
                }
                CHECK(own <= alt + 1e-10);
            }
        }
    }
}

TEST_CASE("pca") {
    SUBCASE("points on a line keep one component") {
        std::vector<ParameterVector> X;
        for (int i = 0; i < 20; ++i) {
            const double t = static_cast<double>(i) / 19.0;
            X.push_back({t, 2.0 * t, -t});
        }
        const PcaProjection p = pca_fit(X, 0.01);
        CHECK(p.retained == 1);
        CHECK(p.explained_fraction[0] == doctest::Approx(1.0).epsilon(1e-10));
        // Perfect reconstruction through the single component.
        for (const auto& x : X) {
            const ParameterVector back = pca_lift(p, pca_project(p, x));
            for (std::size_t d = 0; d < 3; ++d) {
                CHECK(back[d] == doctest::Approx(x[d]).epsilon(1e-8));
            }
        }
    }

    SUBCASE("isotropic cloud keeps every component") {
        Rng rng(17);
        std::vector<ParameterVector> X(400, ParameterVector(3));
        for (auto& x : X) {
            for (double& v : x) v = rng.gaussian(0.0, 1.0);
        }
        const PcaProjection p = pca_fit(X, 0.01);
        CHECK(p.retained == 3);
    }

    SUBCASE("identical points are degenerate but still project") {
        std::vector<ParameterVector> X(5, ParameterVector{1.0, 2.0});
        const PcaProjection p = pca_fit(X, 0.01);
        CHECK(p.degenerate);
        CHECK(p.retained == 1);
        const auto z = pca_project(p, {1.0, 2.0});
        CHECK(pca_lift(p, z)[0] == doctest::Approx(1.0));
        CHECK(pca_lift(p, z)[1] == doctest::Approx(2.0));
    }

    SUBCASE("orthonormal components, correct eigen structure, MSE oracle") {
        Rng rng(19);
        const std::size_t d = 5, n = 200;
        std::vector<ParameterVector> X(n, ParameterVector(d));
        // Anisotropic data: per-axis scales force a deterministic spectrum.
        const double scales[5] = {3.0, 1.5, 0.8, 0.1, 0.02};
        for (auto& x : X) {
            for (std::size_t j = 0; j < d; ++j) x[j] = scales[j] * rng.gaussian(0.0, 1.0);
        }
        const PcaProjection p = pca_fit(X, 0.01);

        // Orthonormality of the retained rows.
        for (std::size_t a = 0; a < p.retained; ++a) {
            for (std::size_t b = 0; b < p.retained; ++b) {
                double dot = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    dot += p.component(a)[j] * p.component(b)[j];
                }
                CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
            }
        }

        // Eigenvalues decreasing and summing to the total variance.
        double total = 0.0;
        for (std::size_t j = 0; j + 1 < d; ++j) {
            CHECK(p.eigenvalues[j] >= p.eigenvalues[j + 1] - 1e-12);
        }
        for (double e : p.eigenvalues) total += e;
        double frac_sum = 0.0;
        for (double f : p.explained_fraction) frac_sum += f;
        CHECK(frac_sum == doctest::Approx(1.0).epsilon(1e-10));

        // Oracle: mean reconstruction MSE equals the dropped eigenvalue sum.
        double mse = 0.0;
        for (const auto& x : X) {
            const ParameterVector back = pca_lift(p, pca_project(p, x));
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = x[j] - back[j];
                mse += diff * diff;
            }
        }
        mse /= static_cast<double>(n);
        CHECK(mse == doctest::Approx(p.dropped_variance()).epsilon(1e-8));
    }
}

TEST_CASE("confidence combination") {
    const std::vector<PathStep> path{{0, 0.0, 4.0}, {1, 0.0, 1.0}};

    SUBCASE("flat variance takes the leaf") {
        CHECK(combine_confidence(path, ConfidenceStrategy::FlatVariance, 0.5) ==
              doctest::Approx(1.0));
    }

    SUBCASE("depth-weighted, gamma = 0.5") {
        // Weights gamma^(1-d): depth 0 -> 0.5, depth 1 -> 1.0; normalized
        // to 1/3 and 2/3. Combined: (1/3)*4 + (2/3)*1 = 2.
        CHECK(combine_confidence(path, ConfidenceStrategy::DepthWeighted, 0.5) ==
              doctest::Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("gamma = 1 averages uniformly") {
        CHECK(combine_confidence(path, ConfidenceStrategy::DepthWeighted, 1.0) ==
              doctest::Approx(2.5).epsilon(1e-12));
    }

    SUBCASE("single-node path is strategy-independent") {
        const std::vector<PathStep> one{{0, 0.0, 3.0}};
        CHECK(combine_confidence(one, ConfidenceStrategy::FlatVariance, 0.5) ==
              doctest::Approx(3.0));
        CHECK(combine_confidence(one, ConfidenceStrategy::DepthWeighted, 0.5) ==
              doctest::Approx(3.0));
    }
}

namespace {

std::vector<Sample> two_cluster_samples(std::size_t per_cluster, Rng& rng) {
    // Feature space splits in two; fitness is a different linear map per
    // cluster, so local models have something to specialize on.
    std::vector<Sample> samples;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < per_cluster; ++i) {
            Sample s;
            s.x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            const double f0 = (c == 0 ? 0.2 : 0.8) + rng.uniform(-0.05, 0.05);
            s.features = {f0, rng.uniform(0.3, 0.7)};
            s.fitness = (c == 0 ? 2.0 * s.x[0] : -3.0 * s.x[1] + 1.0) +
                        rng.uniform(-0.01, 0.01);
            samples.push_back(std::move(s));
        }
    }
    return samples;
}

} // namespace

TEST_CASE("hierarchical surrogate") {
    SUBCASE("depth 0 is a single global model") {
        Rng rng(23);
        const auto samples = two_cluster_samples(20, rng);
        HierarchyConfig cfg;
        cfg.depth = 0;
        const auto h = HierarchicalSurrogate::build(samples, cfg, rng);
        CHECK(h.root().children.empty());
        CHECK(h.root().sample_count == samples.size());
        const auto path = h.predict_path(samples[0].x, samples[0].features);
        CHECK(path.size() == 1);
    }

    SUBCASE("prediction equals the recomputed path sum") {
        Rng rng(29);
        const auto samples = two_cluster_samples(30, rng);
        HierarchyConfig cfg;
        cfg.depth = 1;
        cfg.branching = 2;
        cfg.min_leaf_samples = 5;
        const auto h = HierarchicalSurrogate::build(samples, cfg, rng);
        REQUIRE(h.root().children.size() == 2);

        Rng probe(31);
        for (int t = 0; t < 25; ++t) {
            const ParameterVector x{probe.uniform(-1.0, 1.0), probe.uniform(-1.0, 1.0)};
            const FeatureCoordinates f{probe.uniform(0.0, 1.0), probe.uniform(0.3, 0.7)};
            const auto path = h.predict_path(x, f);
            double sum = 0.0;
            for (const auto& step : path) sum += step.mean;
            const Prediction p = h.predict(x, f);
            CHECK(p.mean == doctest::Approx(sum).epsilon(1e-12));
            CHECK(p.variance ==
                  doctest::Approx(combine_confidence(path, cfg.confidence, cfg.gamma))
                      .epsilon(1e-12));
        }
    }

    SUBCASE("children that add nothing leave the parent fit intact") {
        // A perfectly linear global relationship: the parent model captures
        // it, children fit near-zero residuals, and the summed prediction
        // still matches the target.
        Rng rng(37);
        std::vector<Sample> samples;
        for (int i = 0; i < 60; ++i) {
            Sample s;
            s.x = {rng.uniform(-1.0, 1.0)};
            s.features = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
            s.fitness = 3.0 * s.x[0];
            samples.push_back(std::move(s));
        }
        HierarchyConfig cfg;
        cfg.depth = 1;
        cfg.branching = 2;
        cfg.min_leaf_samples = 5;
        const auto h = HierarchicalSurrogate::build(samples, cfg, rng);
        for (const auto& s : samples) {
            CHECK(h.predict(s.x, s.features).mean ==
                  doctest::Approx(s.fitness).epsilon(0.1));
        }
    }

    SUBCASE("routing picks the nearest centroid") {
        Rng rng(41);
        const auto samples = two_cluster_samples(30, rng);
        HierarchyConfig cfg;
        cfg.depth = 1;
        cfg.branching = 2;
        cfg.min_leaf_samples = 5;
        const auto h = HierarchicalSurrogate::build(samples, cfg, rng);
        REQUIRE(h.root().children.size() == 2);
        const auto& kids = h.root().children;
        const std::size_t left = kids[0].centroid[0] < kids[1].centroid[0] ? 0 : 1;
        // Feature far on the low side must route through the low-centroid child.
        const auto path = h.predict_path({0.0, 0.0}, {0.05, 0.5});
        REQUIRE(path.size() == 2);
        const Prediction leaf_only = kids[left].node_predict({0.0, 0.0});
        CHECK(path[1].mean == doctest::Approx(leaf_only.mean).epsilon(1e-12));
    }

    SUBCASE("small sample sets refuse to split") {
        Rng rng(43);
        const auto samples = two_cluster_samples(3, rng); // 6 total
        HierarchyConfig cfg;
        cfg.depth = 2;
        cfg.branching = 4;
        cfg.min_leaf_samples = 8;
        const auto h = HierarchicalSurrogate::build(samples, cfg, rng);
        CHECK(h.root().children.empty());
    }

    SUBCASE("json export walks the whole tree") {
        Rng rng(47);
        const auto samples = two_cluster_samples(30, rng);
        HierarchyConfig cfg;
        cfg.depth = 1;
        cfg.branching = 2;
        cfg.min_leaf_samples = 5;
        const auto h = HierarchicalSurrogate::build(samples, cfg, rng);
        std::ostringstream os;
        h.export_json(os);
        const std::string json = os.str();
        CHECK(json.find("\"sample_count\"") != std::string::npos);
        CHECK(json.find("\"children\"") != std::string::npos);
        CHECK(json.find("\"retained_dims\"") != std::string::npos);
    }
}
