#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sailkit/core/domain.hpp"
#include "sailkit/core/rng.hpp"
#include "sailkit/surrogate/model.hpp"

namespace sailkit {

struct GpHyperparams {
    std::vector<double> length_scales; // per dimension, > 0
    double signal_variance = 1.0;      // > 0
    double noise_variance = 1e-6;      // >= 0
    double jitter = 1e-8;              // > 0

    static GpHyperparams defaults(std::size_t dim);
    void validate() const;
};

struct GpTrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Squared-exponential (ARD) covariance.
double se_kernel(const ParameterVector& a, const ParameterVector& b,
                 const GpHyperparams& hyper);

// Gaussian-process regressor. Training factorizes K + (noise+jitter) I by
// Cholesky; prediction is O(n) for the mean and O(n^2) for the variance.
// Targets are standardized internally by default; predictions are
// returned in the original units.
class GpModel : public SurrogateModel {
public:
    static GpModel train(const std::vector<ParameterVector>& X,
                         const std::vector<double>& y,
                         GpHyperparams hyper, bool standardize_targets = true);

    Prediction predict(const ParameterVector& x) const override;

    double log_marginal_likelihood() const { return lml_; }
    std::size_t sample_count() const { return n_; }
    std::size_t dim() const { return d_; }
    const GpHyperparams& hyper() const { return hyper_; }
    // Effective jitter after any escalation.
    double jitter_used() const { return jitter_used_; }
    double target_mean() const { return y_mean_; }
    double target_scale() const { return y_scale_; }

private:
    GpModel() = default;

    GpHyperparams hyper_;
    std::size_t n_ = 0, d_ = 0;
    std::vector<double> x_flat_;    // n x d row-major
    std::vector<double> inv_ls_;    // 1 / length_scale per dimension
    std::vector<double> chol_;      // lower-triangular L, n x n row-major
    std::vector<double> alpha_;     // (K + sigma^2 I)^{-1} y_std
    double y_mean_ = 0.0, y_scale_ = 1.0;
    double lml_ = 0.0;
    double jitter_used_ = 0.0;
};

struct GpFitConfig {
    std::size_t restarts = 4;         // multi-start count
    std::size_t sweeps = 12;          // coordinate sweeps per start
    double initial_step = 1.0;        // step in log-space
    double min_step = 1e-3;
    double min_noise = 1e-8;
};

// Multi-start coordinate ascent on log-hyperparameters maximizing the
// exact log marginal likelihood (on standardized targets).
GpHyperparams fit_gp_hyperparams(const std::vector<ParameterVector>& X,
                                 const std::vector<double>& y,
                                 const GpFitConfig& cfg, Rng& rng);

} // namespace sailkit
