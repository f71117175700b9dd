#pragma once

#include <cstddef>
#include <vector>

#include "sailkit/core/rng.hpp"

namespace sailkit {

using ParameterVector = std::vector<double>;
using FeatureCoordinates = std::vector<double>;

// Bounded search space plus the dimensionality of the feature map.
struct DomainSpec {
    std::size_t dim = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t feature_dim = 2;

    // Throws std::invalid_argument when bounds are malformed.
    static DomainSpec make(std::vector<double> lower, std::vector<double> upper,
                           std::size_t feature_dim = 2);

    static DomainSpec unit(std::size_t dim, std::size_t feature_dim = 2);

    double range(std::size_t i) const { return upper[i] - lower[i]; }
};

struct Sample {
    ParameterVector x;
    FeatureCoordinates features;
    double fitness = 0.0;
};

ParameterVector random_vector(const DomainSpec& spec, Rng& rng);

// Additive Gaussian perturbation with per-dimension stddev
// sigma_frac * (upper - lower), clamped back into bounds.
ParameterVector mutate(const ParameterVector& x, double sigma_frac,
                       const DomainSpec& spec, Rng& rng);

enum class InitStrategy { Stratified, Uniform };

// Stratified (Latin-hypercube style) by default: each dimension is cut
// into n equal strata and every stratum receives exactly one point.
std::vector<ParameterVector> initial_set(const DomainSpec& spec, std::size_t n,
                                         Rng& rng,
                                         InitStrategy strategy = InitStrategy::Stratified);

void clamp_to_bounds(ParameterVector& x, const DomainSpec& spec);

} // namespace sailkit
