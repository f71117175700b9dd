#pragma once

#include <cstddef>
#include <vector>

#include "sailkit/core/domain.hpp"

namespace sailkit {

// Principal components of a sample set. Components are stored one after
// another (each of length d, orthonormal), sorted by decreasing
// eigenvalue; components explaining less than `cutoff` of the total
// variance are dropped, with at least one always retained.
struct PcaProjection {
    std::size_t input_dim = 0;
    std::size_t retained = 0;
    std::vector<double> mean;               // d
    std::vector<double> components;         // retained x d, row per component
    std::vector<double> explained_fraction; // all d components, sums to 1
    std::vector<double> eigenvalues;        // all d, decreasing
    bool degenerate = false;                // all-identical input set

    const double* component(std::size_t c) const { return components.data() + c * input_dim; }

    double dropped_variance() const;
};

PcaProjection pca_fit(const std::vector<ParameterVector>& X, double cutoff = 0.01);

std::vector<double> pca_project(const PcaProjection& p, const ParameterVector& x);
ParameterVector pca_lift(const PcaProjection& p, const std::vector<double>& z);

} // namespace sailkit
