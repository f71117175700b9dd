#include "sailkit/surrogate/mlp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>

#include "sailkit/simd/kernels.hpp"

namespace sailkit {

MlpNet MlpNet::zeros(std::size_t input_dim, std::size_t hidden) {
    MlpNet net;
    net.input_dim = input_dim;
    net.hidden = hidden;
    net.params.assign(net.param_count(), 0.0);
    return net;
}

MlpNet MlpNet::random_init(std::size_t input_dim, std::size_t hidden, Rng& rng) {
    MlpNet net = zeros(input_dim, hidden);
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
    for (std::size_t k = 0; k < hidden; ++k) {
        for (std::size_t j = 0; j < input_dim; ++j) {
            net.w1()[k * input_dim + j] = rng.uniform(-0.5, 0.5) * in_scale;
        }
        net.b1()[k] = rng.uniform(-0.5, 0.5) * in_scale;
    }
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (std::size_t k = 0; k < hidden; ++k) {
        net.w2()[k] = rng.uniform(-0.5, 0.5) * out_scale;
    }
    net.b2() = rng.uniform(-0.5, 0.5) * out_scale;
    return net;
}

double MlpNet::forward(const double* x) const {
    double out = b2();
    for (std::size_t k = 0; k < hidden; ++k) {
        const double a = b1()[k] + simd::dot(w1() + k * input_dim, x, input_dim);
        out += w2()[k] * std::tanh(a);
    }
    return out;
}

double MlpNet::forward(const ParameterVector& x) const {
    if (x.size() != input_dim) {
        throw std::invalid_argument("MlpNet::forward: dimensionality mismatch");
    }
    return forward(x.data());
}

std::vector<double> mlp_jacobian(const MlpNet& net,
                                 const std::vector<ParameterVector>& X) {
    const std::size_t n = X.size();
    const std::size_t p = net.param_count();
    const std::size_t d = net.input_dim;
    const std::size_t h = net.hidden;
    std::vector<double> J(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = J.data() + i * p;
        const double* x = X[i].data();
        for (std::size_t k = 0; k < h; ++k) {
            const double a = net.b1()[k] + simd::dot(net.w1() + k * d, x, d);
            const double t = std::tanh(a);
            const double g = net.w2()[k] * (1.0 - t * t);
            for (std::size_t j = 0; j < d; ++j) row[k * d + j] = g * x[j];
            row[h * d + k] = g;           // hidden bias
            row[h * (d + 1) + k] = t;     // output weight
        }
        row[p - 1] = 1.0;                 // output bias
    }
    return J;
}

namespace {

double sse_of(const MlpNet& net, const std::vector<ParameterVector>& X,
              const std::vector<double>& y, std::vector<double>& residuals) {
    double sse = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        residuals[i] = y[i] - net.forward(X[i].data());
        sse += residuals[i] * residuals[i];
    }
    return sse;
}

} // namespace

MlpNet lm_train(const std::vector<ParameterVector>& X,
                const std::vector<double>& y, MlpNet net, const LmConfig& cfg,
                LmTrace* trace) {
    if (X.empty() || X.size() != y.size()) {
        throw std::invalid_argument("lm_train: need matching inputs and targets");
    }
    const std::size_t n = X.size();
    const std::size_t p = net.param_count();

    std::vector<double> residuals(n);
    double sse = sse_of(net, X, y, residuals);
    if (trace) {
        trace->accepted_sse.clear();
        trace->accepted_sse.push_back(sse);
        trace->iterations = 0;
    }

    double lambda = cfg.lambda0;
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        const std::vector<double> J = mlp_jacobian(net, X);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
            Jm(J.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
        Eigen::Map<const Eigen::VectorXd> rm(residuals.data(),
                                             static_cast<Eigen::Index>(n));
        const Eigen::MatrixXd JtJ = Jm.transpose() * Jm;
        const Eigen::VectorXd Jtr = Jm.transpose() * rm;

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += lambda;
            Eigen::LLT<Eigen::MatrixXd> llt(A);
            if (llt.info() == Eigen::Success) {
                const Eigen::VectorXd delta = llt.solve(Jtr);
                MlpNet candidate = net;
                for (std::size_t q = 0; q < p; ++q) {
                    candidate.params[q] += delta[static_cast<Eigen::Index>(q)];
                }
                std::vector<double> cand_res(n);
                const double cand_sse = sse_of(candidate, X, y, cand_res);
                if (cand_sse < sse) {
                    const double drop = sse - cand_sse;
                    net = std::move(candidate);
                    residuals = std::move(cand_res);
                    sse = cand_sse;
                    lambda = std::max(lambda * cfg.lambda_down, 1e-12);
                    accepted = true;
                    if (trace) {
                        trace->accepted_sse.push_back(sse);
                        trace->iterations = iter + 1;
                    }
                    if (drop < cfg.sse_tolerance) return net;
                    break;
                }
            }
            lambda *= cfg.lambda_up;
            if (lambda > cfg.lambda_max) {
                if (iter == 0 && !std::isfinite(sse)) {
                    throw LmTrainingError("lm_train: normal equations unsolvable");
                }
                return net; // converged: no further improving step exists
            }
        }
    }
    return net;
}

} // namespace sailkit
