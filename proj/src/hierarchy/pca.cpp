#include "sailkit/hierarchy/pca.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <numeric>
#include <stdexcept>

#include "sailkit/simd/kernels.hpp"

namespace sailkit {

double PcaProjection::dropped_variance() const {
    double s = 0.0;
    for (std::size_t i = retained; i < eigenvalues.size(); ++i) s += eigenvalues[i];
    return s;
}

PcaProjection pca_fit(const std::vector<ParameterVector>& X, double cutoff) {
    if (X.size() < 2) throw std::invalid_argument("pca_fit: need at least 2 samples");
    const std::size_t n = X.size();
    const std::size_t d = X[0].size();

    PcaProjection p;
    p.input_dim = d;
    p.mean.assign(d, 0.0);
    for (const auto& row : X) {
        for (std::size_t j = 0; j < d; ++j) p.mean[j] += row[j];
    }
    for (double& m : p.mean) m /= static_cast<double>(n);

    // Population covariance (divisor n): the dropped-eigenvalue sum then
    // equals the mean squared reconstruction error exactly.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
    Eigen::VectorXd centered(static_cast<Eigen::Index>(d));
    for (const auto& row : X) {
        for (std::size_t j = 0; j < d; ++j) centered[static_cast<Eigen::Index>(j)] = row[j] - p.mean[j];
        cov.noalias() += centered * centered.transpose();
    }
    cov /= static_cast<double>(n);

    const double total = cov.trace();
    p.eigenvalues.assign(d, 0.0);
    p.explained_fraction.assign(d, 0.0);
    if (total <= 1e-24) {
        // All samples identical: project onto an arbitrary unit axis.
        p.degenerate = true;
        p.retained = 1;
        p.components.assign(d, 0.0);
        p.components[0] = 1.0;
        p.explained_fraction[0] = 1.0;
        return p;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("pca_fit: eigendecomposition failed");
    }
    // Eigen returns ascending order; flip to descending.
    for (std::size_t c = 0; c < d; ++c) {
        const auto src = static_cast<Eigen::Index>(d - 1 - c);
        p.eigenvalues[c] = std::max(es.eigenvalues()[src], 0.0);
        p.explained_fraction[c] = p.eigenvalues[c] / total;
    }

    p.retained = 0;
    for (std::size_t c = 0; c < d; ++c) {
        if (p.explained_fraction[c] >= cutoff) ++p.retained;
    }
    if (p.retained == 0) p.retained = 1;

    p.components.resize(p.retained * d);
    for (std::size_t c = 0; c < p.retained; ++c) {
        const auto src = static_cast<Eigen::Index>(d - 1 - c);
        for (std::size_t j = 0; j < d; ++j) {
            p.components[c * d + j] = es.eigenvectors()(static_cast<Eigen::Index>(j), src);
        }
    }
    return p;
}

std::vector<double> pca_project(const PcaProjection& p, const ParameterVector& x) {
    if (x.size() != p.input_dim) {
        throw std::invalid_argument("pca_project: dimensionality mismatch");
    }
    std::vector<double> centered(p.input_dim);
    for (std::size_t j = 0; j < p.input_dim; ++j) centered[j] = x[j] - p.mean[j];
    std::vector<double> z(p.retained);
    for (std::size_t c = 0; c < p.retained; ++c) {
        z[c] = simd::dot(p.component(c), centered.data(), p.input_dim);
    }
    return z;
}

ParameterVector pca_lift(const PcaProjection& p, const std::vector<double>& z) {
    if (z.size() != p.retained) {
        throw std::invalid_argument("pca_lift: dimensionality mismatch");
    }
    ParameterVector x = p.mean;
    for (std::size_t c = 0; c < p.retained; ++c) {
        simd::axpy(z[c], p.component(c), x.data(), p.input_dim);
    }
    return x;
}

} // namespace sailkit
