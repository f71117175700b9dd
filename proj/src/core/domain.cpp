#include "sailkit/core/domain.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sailkit {

DomainSpec DomainSpec::make(std::vector<double> lower, std::vector<double> upper,
                            std::size_t feature_dim) {
    if (lower.empty() || lower.size() != upper.size()) {
        throw std::invalid_argument("DomainSpec: bounds must be non-empty and equal-length");
    }
    if (feature_dim < 1) {
        throw std::invalid_argument("DomainSpec: feature_dim must be >= 1");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] < upper[i])) {
            throw std::invalid_argument("DomainSpec: lower[" + std::to_string(i) +
                                        "] must be < upper[" + std::to_string(i) + "]");
        }
    }
    DomainSpec spec;
    spec.dim = lower.size();
    spec.lower = std::move(lower);
    spec.upper = std::move(upper);
    spec.feature_dim = feature_dim;
    return spec;
}

DomainSpec DomainSpec::unit(std::size_t dim, std::size_t feature_dim) {
    return make(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0),
                feature_dim);
}

void clamp_to_bounds(ParameterVector& x, const DomainSpec& spec) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], spec.lower[i], spec.upper[i]);
    }
}

ParameterVector random_vector(const DomainSpec& spec, Rng& rng) {
    ParameterVector x(spec.dim);
    for (std::size_t i = 0; i < spec.dim; ++i) {
        x[i] = rng.uniform(spec.lower[i], spec.upper[i]);
    }
    return x;
}

ParameterVector mutate(const ParameterVector& x, double sigma_frac,
                       const DomainSpec& spec, Rng& rng) {
    if (!(sigma_frac > 0.0) || sigma_frac > 1.0) {
        throw std::invalid_argument("mutate: sigma_frac must be in (0, 1]");
    }
    ParameterVector child(x);
    for (std::size_t i = 0; i < spec.dim; ++i) {
        child[i] += rng.gaussian(0.0, sigma_frac * spec.range(i));
    }
    clamp_to_bounds(child, spec);
    return child;
}

std::vector<ParameterVector> initial_set(const DomainSpec& spec, std::size_t n,
                                         Rng& rng, InitStrategy strategy) {
    if (n < 1) throw std::invalid_argument("initial_set: n must be >= 1");
    std::vector<ParameterVector> out(n, ParameterVector(spec.dim));
    if (strategy == InitStrategy::Uniform) {
        for (auto& x : out) x = random_vector(spec, rng);
        return out;
    }
    // One point per stratum per dimension, strata shuffled independently.
    std::vector<std::size_t> perm(n);
    for (std::size_t d = 0; d < spec.dim; ++d) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        const double width = spec.range(d) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = spec.lower[d] + width * static_cast<double>(perm[i]);
            out[i][d] = lo + rng.uniform(0.0, width);
        }
    }
    return out;
}

} // namespace sailkit
