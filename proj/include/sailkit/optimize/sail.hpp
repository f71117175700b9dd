#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "sailkit/archive/archive.hpp"
#include "sailkit/core/domain.hpp"
#include "sailkit/hierarchy/hierarchy.hpp"
#include "sailkit/optimize/map_elites.hpp"
#include "sailkit/surrogate/bann.hpp"
#include "sailkit/surrogate/gp.hpp"

namespace sailkit {

// mean + kappa * sqrt(variance). Throws on negative variance.
double ucb(double mean, double variance, double kappa);

enum class SurrogateKind { Gp, Bann, Hierarchical };

struct SailConfig {
    std::size_t init_count = 50;   // true evaluations before round 1
    std::size_t rounds = 10;
    std::size_t batch_size = 10;   // new true evaluations per round
    double kappa = 2.0;
    SurrogateKind surrogate = SurrogateKind::Gp;

    // Inner illumination runs on the surrogate surface.
    std::vector<std::size_t> resolution{32, 32};
    std::size_t acq_evaluations = 2000;   // per acquisition map
    std::size_t pred_evaluations = 10000; // final prediction map
    std::size_t inner_init_count = 50;
    double sigma_frac = 0.1;
    std::uint64_t seed = 0;

    // Surrogate training knobs.
    bool gp_fit_hyperparams = true;
    std::size_t gp_hyper_subsample = 150; // cap for the likelihood search
    GpFitConfig gp_fit;
    BannConfig bann;
    HierarchyConfig hierarchy;

    void validate() const;
};

struct SailRound {
    std::size_t round = 0;
    std::size_t true_evals = 0;
    double acq_coverage = 0.0;
    double pred_qd_score_surrogate = 0.0;
    double surrogate_train_seconds = 0.0;
};

struct SailResult {
    Archive prediction_archive;
    std::vector<Sample> true_samples;
    std::vector<SailRound> rounds;
};

SailResult sail(const Problem& problem, const SailConfig& cfg);

// Train the configured surrogate on the sample set; the returned
// predictor is safe for repeated read-only evaluation. Exposed for the
// experiment harness.
std::function<Prediction(const ParameterVector&)> train_sail_surrogate(
    const std::vector<Sample>& samples, const SailConfig& cfg,
    const Problem& problem, Rng& rng);

// round,true_evals,acq_coverage,pred_qd_score_surrogate,surrogate_train_seconds
void export_sail_rounds_csv(const std::vector<SailRound>& rounds, std::ostream& os);

} // namespace sailkit
