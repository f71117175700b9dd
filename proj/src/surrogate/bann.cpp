#include "sailkit/surrogate/bann.hpp"

#include <cmath>
#include <stdexcept>

namespace sailkit {

ParameterVector Normalization::normalize_input(const ParameterVector& x) const {
    ParameterVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double range = in_hi[i] - in_lo[i];
        z[i] = range > 0.0 ? 2.0 * (x[i] - in_lo[i]) / range - 1.0 : 0.0;
    }
    return z;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = static_cast<std::size_t>(rng.index(n));
    return idx;
}

BannEnsemble BannEnsemble::train(const std::vector<ParameterVector>& X,
                                 const std::vector<double>& y,
                                 const BannConfig& cfg, Rng& rng,
                                 const DomainSpec* bounds) {
    if (cfg.members < 2) throw std::invalid_argument("BannEnsemble::train: need M >= 2");
    if (X.empty() || X.size() != y.size()) {
        throw std::invalid_argument("BannEnsemble::train: need matching inputs and targets");
    }
    const std::size_t n = X.size();
    const std::size_t d = X[0].size();

    BannEnsemble e;
    if (bounds) {
        e.norm_.in_lo = bounds->lower;
        e.norm_.in_hi = bounds->upper;
    } else {
        e.norm_.in_lo.assign(d, 0.0);
        e.norm_.in_hi.assign(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            double lo = X[0][j], hi = X[0][j];
            for (const auto& row : X) {
                lo = std::min(lo, row[j]);
                hi = std::max(hi, row[j]);
            }
            e.norm_.in_lo[j] = lo;
            e.norm_.in_hi[j] = hi;
        }
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    e.norm_.y_mean = mean;
    e.norm_.y_scale = sd > 1e-12 ? sd : 1.0;

    std::vector<ParameterVector> Xn(n);
    std::vector<double> yn(n);
    for (std::size_t i = 0; i < n; ++i) {
        Xn[i] = e.norm_.normalize_input(X[i]);
        yn[i] = e.norm_.normalize_target(y[i]);
    }

    for (std::size_t m = 0; m < cfg.members; ++m) {
        Rng member_rng = rng.split(m);
        const auto idx = bootstrap_indices(n, member_rng);
        std::vector<ParameterVector> Xb(n);
        std::vector<double> yb(n);
        for (std::size_t i = 0; i < n; ++i) {
            Xb[i] = Xn[idx[i]];
            yb[i] = yn[idx[i]];
        }
        try {
            MlpNet init = MlpNet::random_init(d, cfg.hidden, member_rng);
            e.members_.push_back(lm_train(Xb, yb, std::move(init), cfg.lm));
        } catch (const LmTrainingError&) {
            ++e.failed_;
        }
    }
    if (e.failed_ * 2 > cfg.members) {
        throw LmTrainingError("BannEnsemble::train: more than half of the members failed");
    }
    return e;
}

std::vector<double> BannEnsemble::member_outputs(const ParameterVector& x) const {
    const ParameterVector z = norm_.normalize_input(x);
    std::vector<double> out(members_.size());
    for (std::size_t m = 0; m < members_.size(); ++m) {
        out[m] = norm_.denormalize_target(members_[m].forward(z.data()));
    }
    return out;
}

Prediction BannEnsemble::predict(const ParameterVector& x) const {
    const auto out = member_outputs(x);
    const std::size_t m = out.size();
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    var = m > 1 ? var / static_cast<double>(m - 1) : 0.0;
    return {mean, var};
}

} // namespace sailkit
