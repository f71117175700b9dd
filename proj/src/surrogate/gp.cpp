#include "sailkit/surrogate/gp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sailkit/simd/kernels.hpp"

namespace sailkit {

GpHyperparams GpHyperparams::defaults(std::size_t dim) {
    GpHyperparams h;
    h.length_scales.assign(dim, 0.5);
    h.signal_variance = 1.0;
    h.noise_variance = 1e-6;
    h.jitter = 1e-8;
    return h;
}

void GpHyperparams::validate() const {
    if (length_scales.empty()) {
        throw std::invalid_argument("GpHyperparams: empty length scales");
    }
    for (double ls : length_scales) {
        if (!(ls > 0.0)) throw std::invalid_argument("GpHyperparams: length scales must be > 0");
    }
    if (!(signal_variance > 0.0)) throw std::invalid_argument("GpHyperparams: signal_variance must be > 0");
    if (noise_variance < 0.0) throw std::invalid_argument("GpHyperparams: noise_variance must be >= 0");
    if (!(jitter > 0.0)) throw std::invalid_argument("GpHyperparams: jitter must be > 0");
}

double se_kernel(const ParameterVector& a, const ParameterVector& b,
                 const GpHyperparams& hyper) {
    if (a.size() != b.size() || a.size() != hyper.length_scales.size()) {
        throw std::invalid_argument("se_kernel: dimensionality mismatch");
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / hyper.length_scales[i];
        r2 += d * d;
    }
    return hyper.signal_variance * std::exp(-0.5 * r2);
}

GpModel GpModel::train(const std::vector<ParameterVector>& X,
                       const std::vector<double>& y, GpHyperparams hyper,
                       bool standardize_targets) {
    if (X.empty() || X.size() != y.size()) {
        throw std::invalid_argument("GpModel::train: need n >= 1 inputs with matching targets");
    }
    hyper.validate();
    const std::size_t n = X.size();
    const std::size_t d = X[0].size();
    if (hyper.length_scales.size() != d) {
        throw std::invalid_argument("GpModel::train: length-scale dimensionality mismatch");
    }

    GpModel m;
    m.hyper_ = hyper;
    m.n_ = n;
    m.d_ = d;
    m.x_flat_.resize(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        if (X[i].size() != d) {
            throw std::invalid_argument("GpModel::train: ragged input matrix");
        }
        std::copy(X[i].begin(), X[i].end(), m.x_flat_.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    for (double v : m.x_flat_) {
        if (!std::isfinite(v)) throw GpTrainingError("GpModel::train: non-finite input");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw GpTrainingError("GpModel::train: non-finite target");
    }
    m.inv_ls_.resize(d);
    for (std::size_t j = 0; j < d; ++j) m.inv_ls_[j] = 1.0 / hyper.length_scales[j];

    if (standardize_targets) {
        m.y_mean_ = simd::sum(y.data(), n) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : y) ss += (v - m.y_mean_) * (v - m.y_mean_);
        const double sd = std::sqrt(ss / static_cast<double>(n));
        m.y_scale_ = sd > 1e-12 ? sd : 1.0;
    }
    Eigen::VectorXd ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[static_cast<Eigen::Index>(i)] = (y[i] - m.y_mean_) / m.y_scale_;

    Eigen::MatrixXd K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = m.x_flat_.data() + i * d;
        K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = hyper.signal_variance;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = m.x_flat_.data() + j * d;
            const double r2 = simd::sqdist_scaled(xi, xj, m.inv_ls_.data(), d);
            const double v = hyper.signal_variance * std::exp(-0.5 * r2);
            K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = hyper.jitter;
    for (;;) {
        Eigen::MatrixXd Kj = K;
        Kj.diagonal().array() += hyper.noise_variance + jitter;
        llt.compute(Kj);
        if (llt.info() == Eigen::Success) break;
        jitter *= 2.0;
        if (jitter > 1e-4) {
            throw GpTrainingError("GpModel::train: Gram matrix not positive definite after jitter escalation");
        }
    }
    m.jitter_used_ = jitter;

    Eigen::MatrixXd L = llt.matrixL();
    Eigen::VectorXd alpha = llt.solve(ys);

    m.chol_.resize(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            m.chol_[i * n + j] = L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    m.alpha_.assign(alpha.data(), alpha.data() + n);

    double log_det = 0.0;
    for (std::size_t i = 0; i < n; ++i) log_det += std::log(m.chol_[i * n + i]);
    m.lml_ = -0.5 * ys.dot(alpha) - log_det -
             0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
    return m;
}

Prediction GpModel::predict(const ParameterVector& x) const {
    if (x.size() != d_) {
        throw std::invalid_argument("GpModel::predict: dimensionality mismatch");
    }
    std::vector<double> k(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double r2 = simd::sqdist_scaled(x.data(), x_flat_.data() + i * d_,
                                              inv_ls_.data(), d_);
        k[i] = hyper_.signal_variance * std::exp(-0.5 * r2);
    }
    const double mean_std = simd::dot(k.data(), alpha_.data(), n_);

    // v = L^{-1} k by forward substitution.
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = chol_.data() + i * n_;
        v[i] = (k[i] - simd::dot(row, v.data(), i)) / row[i];
    }
    double var_std = hyper_.signal_variance - simd::dot(v.data(), v.data(), n_);
    var_std = std::max(var_std, 0.0);

    return {y_mean_ + y_scale_ * mean_std, y_scale_ * y_scale_ * var_std};
}

namespace {

double lml_or_ninf(const std::vector<ParameterVector>& X,
                   const std::vector<double>& y, const GpHyperparams& h) {
    try {
        return GpModel::train(X, y, h).log_marginal_likelihood();
    } catch (const GpTrainingError&) {
        return -std::numeric_limits<double>::infinity();
    }
}

} // namespace

GpHyperparams fit_gp_hyperparams(const std::vector<ParameterVector>& X,
                                 const std::vector<double>& y,
                                 const GpFitConfig& cfg, Rng& rng) {
    if (X.size() < 2) {
        throw std::invalid_argument("fit_gp_hyperparams: need n >= 2");
    }
    const std::size_t d = X[0].size();

    // Data-scaled seed: length scale = per-dimension spread.
    GpHyperparams scaled = GpHyperparams::defaults(d);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = X[0][j], hi = X[0][j];
        for (const auto& row : X) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        scaled.length_scales[j] = std::max(0.25 * (hi - lo), 1e-3);
    }
    scaled.noise_variance = 1e-4;

    std::vector<GpHyperparams> seeds{GpHyperparams::defaults(d), scaled};
    for (std::size_t r = 2; r < std::max<std::size_t>(cfg.restarts, 2); ++r) {
        GpHyperparams h = scaled;
        for (double& ls : h.length_scales) ls *= std::exp(rng.uniform(-1.5, 1.5));
        h.signal_variance = std::exp(rng.uniform(-1.0, 1.0));
        h.noise_variance = std::exp(rng.uniform(std::log(1e-6), std::log(1e-2)));
        seeds.push_back(std::move(h));
    }

    // Optimize [log ls_0.. log ls_{d-1}, log signal, log noise].
    auto unpack = [&](const std::vector<double>& theta) {
        GpHyperparams h;
        h.length_scales.resize(d);
        for (std::size_t j = 0; j < d; ++j) h.length_scales[j] = std::exp(theta[j]);
        h.signal_variance = std::exp(theta[d]);
        h.noise_variance = std::max(std::exp(theta[d + 1]), cfg.min_noise);
        return h;
    };

    GpHyperparams best;
    double best_lml = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (const auto& seed : seeds) {
        std::vector<double> theta(d + 2);
        for (std::size_t j = 0; j < d; ++j) theta[j] = std::log(seed.length_scales[j]);
        theta[d] = std::log(seed.signal_variance);
        theta[d + 1] = std::log(std::max(seed.noise_variance, cfg.min_noise));

        double cur = lml_or_ninf(X, y, unpack(theta));
        double step = cfg.initial_step;
        for (std::size_t sweep = 0; sweep < cfg.sweeps && step >= cfg.min_step; ++sweep) {
            bool improved = false;
            for (std::size_t p = 0; p < theta.size(); ++p) {
                for (double dir : {+1.0, -1.0}) {
                    std::vector<double> probe = theta;
                    probe[p] += dir * step;
                    const double val = lml_or_ninf(X, y, unpack(probe));
                    if (val > cur) {
                        cur = val;
                        theta = std::move(probe);
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (cur > best_lml) {
            best_lml = cur;
            best = unpack(theta);
            have_best = true;
        }
    }
    if (!have_best || !std::isfinite(best_lml)) {
        throw GpTrainingError("fit_gp_hyperparams: no candidate factorized");
    }
    return best;
}

} // namespace sailkit
