#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "sailkit/archive/archive.hpp"
#include "sailkit/core/domain.hpp"
#include "sailkit/core/rng.hpp"

namespace sailkit {

// A problem pairs the (expensive) objective with a cheap feature
// function. Internally fitness is always maximized; minimization
// objectives are negated or offset at the problem boundary.
struct Problem {
    DomainSpec spec;
    std::function<double(const ParameterVector&)> evaluate;
    std::function<FeatureCoordinates(const ParameterVector&)> features;
};

struct IlluminationConfig {
    std::size_t init_count = 100;
    std::size_t total_evaluations = 10000;
    double sigma_frac = 0.1;
    std::vector<std::size_t> resolution{32, 32};
    std::uint64_t seed = 0;

    void validate() const;
};

struct HistoryRow {
    std::size_t evals = 0;
    double coverage = 0.0;
    double qd_score = 0.0;
    double best = 0.0;
};

struct IlluminationResult {
    Archive archive;
    std::vector<HistoryRow> history;
    std::size_t evaluations = 0;
};

// The MAP-Elites loop. `fitness` is called exactly
// cfg.total_evaluations times (init + one child per iteration); it may
// be the true objective or a surrogate surface over the same domain.
IlluminationResult map_elites(
    const DomainSpec& spec,
    const std::function<double(const ParameterVector&)>& fitness,
    const std::function<FeatureCoordinates(const ParameterVector&)>& features,
    const IlluminationConfig& cfg);

IlluminationResult map_elites(const Problem& problem, const IlluminationConfig& cfg);

void export_history_csv(const std::vector<HistoryRow>& history, std::ostream& os);

struct HillClimbResult {
    ParameterVector x_best;
    double f_best = 0.0;
    std::size_t iterations = 0;
};

// Deterministic coordinate-probe ascent on `surface`: probe +-step per
// dimension (step is a fraction of each dimension's range), move to the
// best improving probe, halve the step when nothing improves, stop when
// step < 1e-6 or max_iters is reached. Never leaves bounds.
HillClimbResult hill_climb(const std::function<double(const ParameterVector&)>& surface,
                           const ParameterVector& start, const DomainSpec& spec,
                           double step_frac, std::size_t max_iters);

} // namespace sailkit
