#include "sailkit/hierarchy/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "sailkit/hierarchy/kmeans.hpp"
#include "sailkit/simd/kernels.hpp"

namespace sailkit {

namespace {

class ConstantModel : public SurrogateModel {
public:
    explicit ConstantModel(double value) : value_(value) {}
    Prediction predict(const ParameterVector&) const override { return {value_, 0.0}; }

private:
    double value_;
};

std::shared_ptr<SurrogateModel> train_base_model(
    const std::vector<ParameterVector>& Z, const std::vector<double>& y,
    const BaseModelConfig& cfg, Rng& rng, bool* failed) {
    *failed = false;
    try {
        if (cfg.kind == BaseModelKind::Gp) {
            GpHyperparams hyper;
            if (cfg.fit_gp_hyperparams && Z.size() >= 4) {
                Rng fit_rng = rng.split(1);
                hyper = fit_gp_hyperparams(Z, y, cfg.gp_fit, fit_rng);
            } else {
                hyper = GpHyperparams::defaults(Z[0].size());
                for (std::size_t j = 0; j < Z[0].size(); ++j) {
                    double lo = Z[0][j], hi = Z[0][j];
                    for (const auto& row : Z) {
                        lo = std::min(lo, row[j]);
                        hi = std::max(hi, row[j]);
                    }
                    hyper.length_scales[j] = std::max(0.25 * (hi - lo), 1e-3);
                }
                hyper.noise_variance = 1e-4;
            }
            return std::make_shared<GpModel>(GpModel::train(Z, y, hyper));
        }
        Rng bann_rng = rng.split(2);
        return std::make_shared<BannEnsemble>(
            BannEnsemble::train(Z, y, cfg.bann, bann_rng));
    } catch (const std::exception&) {
        *failed = true;
        return nullptr;
    }
}

struct Builder {
    const std::vector<Sample>& samples;
    const HierarchyConfig& cfg;

    SegmentNode build_node(const std::vector<std::size_t>& members,
                           const std::vector<double>& targets,
                           std::size_t depth, Rng rng) {
        SegmentNode node;
        node.depth = depth;
        node.sample_count = members.size();

        const std::size_t fd = samples[members[0]].features.size();
        node.centroid.assign(fd, 0.0);
        for (std::size_t i : members) {
            for (std::size_t j = 0; j < fd; ++j) node.centroid[j] += samples[i].features[j];
        }
        for (double& c : node.centroid) c /= static_cast<double>(members.size());

        std::vector<ParameterVector> X;
        X.reserve(members.size());
        for (std::size_t i : members) X.push_back(samples[i].x);

        const double fallback =
            cfg.mode == HierarchyBuildMode::Residual
                ? 0.0
                : simd::sum(targets.data(), targets.size()) /
                      static_cast<double>(targets.size());

        std::vector<ParameterVector> Z;
        if (members.size() >= 2) {
            node.pca = pca_fit(X, cfg.pca_cutoff);
            Z.reserve(members.size());
            for (const auto& x : X) Z.push_back(pca_project(node.pca, x));
            bool failed = false;
            Rng model_rng = rng.split(17);
            node.model = train_base_model(Z, targets, cfg.base, model_rng, &failed);
            if (failed) {
                node.model = std::make_shared<ConstantModel>(fallback);
                node.zero_model = true;
            }
        } else {
            // Too small for PCA or a trained model.
            node.pca.input_dim = samples[members[0]].x.size();
            node.pca.retained = 1;
            node.pca.mean.assign(node.pca.input_dim, 0.0);
            node.pca.components.assign(node.pca.input_dim, 0.0);
            node.pca.components[0] = 1.0;
            node.model = std::make_shared<ConstantModel>(fallback);
            node.zero_model = true;
        }

        double sse = 0.0;
        std::vector<double> residuals(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            const double pred =
                node.zero_model ? fallback : node.model->predict(Z[i]).mean;
            residuals[i] = targets[i] - pred;
            sse += residuals[i] * residuals[i];
        }
        node.training_rmse = std::sqrt(sse / static_cast<double>(members.size()));

        const bool can_split = depth < cfg.depth &&
                               members.size() >= cfg.branching * cfg.min_leaf_samples &&
                               members.size() >= cfg.branching;
        if (!can_split) return node;

        std::vector<std::vector<double>> feats;
        feats.reserve(members.size());
        for (std::size_t i : members) feats.push_back(samples[i].features);
        Rng km_rng = rng.split(31);
        const KMeansResult km = kmeans(feats, cfg.branching, cfg.kmeans_restarts, km_rng);

        for (std::size_t c = 0; c < cfg.branching; ++c) {
            std::vector<std::size_t> child_members;
            std::vector<double> child_targets;
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (km.assignment[i] != c) continue;
                child_members.push_back(members[i]);
                child_targets.push_back(cfg.mode == HierarchyBuildMode::Residual
                                            ? residuals[i]
                                            : targets[i]);
            }
            if (child_members.empty()) continue;
            SegmentNode child = build_node(child_members, child_targets, depth + 1,
                                           rng.split(100 + c));
            // Keep the k-means centroid for routing, not the member mean.
            child.centroid = km.centroids[c];
            node.children.push_back(std::move(child));
        }
        return node;
    }
};

} // namespace

Prediction SegmentNode::node_predict(const ParameterVector& x) const {
    if (zero_model) return model->predict({});
    return model->predict(pca_project(pca, x));
}

double combine_confidence(const std::vector<PathStep>& path,
                          ConfidenceStrategy strategy, double gamma) {
    if (path.empty()) return 0.0;
    switch (strategy) {
    case ConfidenceStrategy::FlatVariance:
        // Parent means are constant across the leaf model's members, so
        // the spread of full-path predictions is the leaf spread.
        return path.back().variance;
    case ConfidenceStrategy::DepthWeighted: {
        const std::size_t max_depth = path.back().depth;
        double wsum = 0.0, acc = 0.0;
        for (const auto& step : path) {
            const double w = std::pow(gamma, static_cast<double>(max_depth - step.depth));
            wsum += w;
            acc += w * step.variance;
        }
        return acc / wsum;
    }
    }
    throw std::invalid_argument("combine_confidence: unknown strategy");
}

HierarchicalSurrogate HierarchicalSurrogate::build(const std::vector<Sample>& samples,
                                                   const HierarchyConfig& cfg,
                                                   Rng& rng) {
    if (samples.size() < 2) {
        throw std::invalid_argument("HierarchicalSurrogate::build: need at least 2 samples");
    }
    if (cfg.branching < 2) {
        throw std::invalid_argument("HierarchicalSurrogate::build: branching must be >= 2");
    }
    HierarchicalSurrogate h;
    h.cfg_ = cfg;
    std::vector<std::size_t> all(samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<double> targets(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) targets[i] = samples[i].fitness;
    Builder builder{samples, cfg};
    h.root_ = builder.build_node(all, targets, 0, rng.split(7));
    return h;
}

std::vector<PathStep> HierarchicalSurrogate::predict_path(
    const ParameterVector& x, const FeatureCoordinates& f) const {
    std::vector<PathStep> path;
    const SegmentNode* node = &root_;
    for (;;) {
        const Prediction p = node->node_predict(x);
        path.push_back({node->depth, p.mean, p.variance});
        if (node->children.empty()) break;
        const SegmentNode* next = nullptr;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& child : node->children) {
            const double d = simd::sqdist(f.data(), child.centroid.data(), f.size());
            if (d < best) {
                best = d;
                next = &child;
            }
        }
        node = next;
    }
    return path;
}

Prediction HierarchicalSurrogate::predict(const ParameterVector& x,
                                          const FeatureCoordinates& f) const {
    const auto path = predict_path(x, f);
    double mean = 0.0;
    for (const auto& step : path) mean += step.mean;
    if (cfg_.mode == HierarchyBuildMode::IndependentSubsets) {
        mean /= static_cast<double>(path.size());
    }
    return {mean, combine_confidence(path, cfg_.confidence, cfg_.gamma)};
}

namespace {

nlohmann::json node_to_json(const SegmentNode& node) {
    nlohmann::json j;
    j["depth"] = node.depth;
    j["centroid"] = node.centroid;
    j["sample_count"] = node.sample_count;
    j["retained_dims"] = node.pca.retained;
    j["training_rmse"] = node.training_rmse;
    j["zero_model"] = node.zero_model;
    j["children"] = nlohmann::json::array();
    for (const auto& child : node.children) j["children"].push_back(node_to_json(child));
    return j;
}

} // namespace

void HierarchicalSurrogate::export_json(std::ostream& os) const {
    os << node_to_json(root_).dump(2) << "\n";
}

} // namespace sailkit
