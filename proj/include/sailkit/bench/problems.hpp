#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sailkit/core/domain.hpp"
#include "sailkit/optimize/map_elites.hpp"

namespace sailkit {

double ackley(const ParameterVector& x, double a = 20.0, double b = 0.2,
              double c = 2.0 * 3.14159265358979323846);

double rastrigin(const ParameterVector& x);

// Synthetic stand-in for the CFD drag objective: a smooth multimodal
// function of a fixed 15 -> 4 orthonormal latent projection (drag is
// exactly invariant along the 11-dimensional null space), with two
// smooth feature functionals mapped into [0,1]. Not an aerodynamic
// simulation.
double foil_drag(const ParameterVector& x);
FeatureCoordinates foil_features(const ParameterVector& x);
// Row c of the baked-in latent map (length 15), for structural tests.
const std::vector<double>& foil_latent_row(std::size_t c);
constexpr std::size_t kFoilDim = 15;
constexpr std::size_t kFoilLatentDim = 4;

// A registered objective with both its raw (minimization) form and the
// internal maximization adapter.
struct BenchmarkProblem {
    std::string name;
    DomainSpec spec;
    std::function<double(const ParameterVector&)> objective; // raw, lower is better
    std::function<double(const ParameterVector&)> fitness;   // higher is better
    std::function<FeatureCoordinates(const ParameterVector&)> features;
    std::optional<std::pair<ParameterVector, double>> optimum; // raw objective

    Problem as_problem() const { return {spec, fitness, features}; }
};

// Registry addressable by name: ackley-1d, ackley-2d, rastrigin-2d,
// foil-proxy. Throws std::invalid_argument for unknown names.
const BenchmarkProblem& get_problem(const std::string& name);
std::vector<std::string> problem_names();

} // namespace sailkit
