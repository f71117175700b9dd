#pragma once

#include <memory>
#include <ostream>
#include <vector>

#include "sailkit/core/domain.hpp"
#include "sailkit/core/rng.hpp"
#include "sailkit/hierarchy/pca.hpp"
#include "sailkit/surrogate/bann.hpp"
#include "sailkit/surrogate/gp.hpp"
#include "sailkit/surrogate/model.hpp"

namespace sailkit {

enum class BaseModelKind { Gp, Bann };

struct BaseModelConfig {
    BaseModelKind kind = BaseModelKind::Gp;
    bool fit_gp_hyperparams = true;
    GpFitConfig gp_fit;
    BannConfig bann{4, 6, {}}; // small members/hidden: many node models get trained
};

enum class ConfidenceStrategy { FlatVariance, DepthWeighted };

enum class HierarchyBuildMode {
    // Child models predict the residual of their parent chain; prediction
    // is the sum along the routed path.
    Residual,
    // Every node is trained on raw targets over its own sample subset;
    // prediction is the bagged mean along the routed path.
    IndependentSubsets,
};

struct HierarchyConfig {
    std::size_t depth = 2;
    std::size_t branching = 4;
    std::size_t min_leaf_samples = 8;
    std::size_t kmeans_restarts = 10;
    double pca_cutoff = 0.01;
    BaseModelConfig base;
    HierarchyBuildMode mode = HierarchyBuildMode::Residual;
    ConfidenceStrategy confidence = ConfidenceStrategy::FlatVariance;
    double gamma = 0.5; // depth-weighted decay toward general models
};

// One segment of the feature-space decomposition, with the model trained
// in the segment's own PCA-reduced parameter space.
struct SegmentNode {
    std::size_t depth = 0;
    std::vector<double> centroid; // feature-space position
    std::size_t sample_count = 0;
    PcaProjection pca;
    std::shared_ptr<SurrogateModel> model; // predicts in reduced space
    bool zero_model = false;               // training failed; predicts 0
    double training_rmse = 0.0;
    std::vector<SegmentNode> children;

    Prediction node_predict(const ParameterVector& x) const;
};

// Per-path-node contribution collected during prediction.
struct PathStep {
    std::size_t depth = 0;
    double mean = 0.0;
    double variance = 0.0;
};

double combine_confidence(const std::vector<PathStep>& path,
                          ConfidenceStrategy strategy, double gamma);

class HierarchicalSurrogate {
public:
    static HierarchicalSurrogate build(const std::vector<Sample>& samples,
                                       const HierarchyConfig& cfg, Rng& rng);

    // Route f down the tree by nearest centroid per level and combine the
    // path-node predictions.
    Prediction predict(const ParameterVector& x, const FeatureCoordinates& f) const;

    std::vector<PathStep> predict_path(const ParameterVector& x,
                                       const FeatureCoordinates& f) const;

    const SegmentNode& root() const { return root_; }
    const HierarchyConfig& config() const { return cfg_; }

    // JSON tree: per node {depth, centroid, sample_count, retained_dims,
    // training_rmse}.
    void export_json(std::ostream& os) const;

private:
    SegmentNode root_;
    HierarchyConfig cfg_;
};

} // namespace sailkit
