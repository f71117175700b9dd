#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sailkit/core/domain.hpp"
#include "sailkit/core/rng.hpp"

namespace sailkit {

struct LmTrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-hidden-layer perceptron: tanh hidden units, identity output.
// Parameter layout: input weights (row per hidden unit), hidden biases,
// output weights, output bias.
struct MlpNet {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;
    std::vector<double> params;

    static MlpNet zeros(std::size_t input_dim, std::size_t hidden);
    // Uniform [-0.5, 0.5] scaled by 1/sqrt(fan-in).
    static MlpNet random_init(std::size_t input_dim, std::size_t hidden, Rng& rng);

    std::size_t param_count() const { return hidden * (input_dim + 1) + hidden + 1; }

    double forward(const double* x) const;
    double forward(const ParameterVector& x) const;

    // Accessors into the flat parameter vector.
    double* w1() { return params.data(); }
    const double* w1() const { return params.data(); }
    double* b1() { return params.data() + hidden * input_dim; }
    const double* b1() const { return params.data() + hidden * input_dim; }
    double* w2() { return params.data() + hidden * (input_dim + 1); }
    const double* w2() const { return params.data() + hidden * (input_dim + 1); }
    double& b2() { return params[param_count() - 1]; }
    double b2() const { return params[param_count() - 1]; }
};

// Analytic Jacobian of the network output w.r.t. every parameter, one row
// per sample (n x p, row-major).
std::vector<double> mlp_jacobian(const MlpNet& net,
                                 const std::vector<ParameterVector>& X);

struct LmConfig {
    double lambda0 = 1e-2;
    double lambda_up = 10.0;
    double lambda_down = 0.1;
    double lambda_max = 1e10;
    std::size_t max_iters = 200;
    double sse_tolerance = 1e-9;
};

struct LmTrace {
    std::vector<double> accepted_sse; // SSE after each accepted step, index 0 = initial
    std::size_t iterations = 0;
};

// Levenberg-Marquardt on sum-of-squares residuals, starting from `net`.
// The accepted-SSE trace is non-increasing by construction.
MlpNet lm_train(const std::vector<ParameterVector>& X,
                const std::vector<double>& y, MlpNet net, const LmConfig& cfg,
                LmTrace* trace = nullptr);

} // namespace sailkit
