#include "sailkit/bench/problems.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "sailkit/simd/kernels.hpp"

namespace sailkit {

double ackley(const ParameterVector& x, double a, double b, double c) {
    const auto n = static_cast<double>(x.size());
    double sum_sq = 0.0, sum_cos = 0.0;
    for (double v : x) {
        sum_sq += v * v;
        sum_cos += std::cos(c * v);
    }
    return -a * std::exp(-b * std::sqrt(sum_sq / n)) - std::exp(sum_cos / n) + a +
           std::exp(1.0);
}

double rastrigin(const ParameterVector& x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        s += v * v - 10.0 * std::cos(2.0 * M_PI * v);
    }
    return s;
}

namespace {

// Deterministic Gaussian stream independent of the C++ stdlib, so the
// latent map is identical on every platform.
struct FixedStream {
    std::uint64_t state;
    explicit FixedStream(std::uint64_t seed) : state(seed) {}
    double next_uniform() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
    }
    double next_gaussian() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

// 4 orthonormal rows of length 15, seeded once.
const std::vector<std::vector<double>>& latent_map() {
    static const std::vector<std::vector<double>> rows = [] {
        FixedStream stream(0x5a11f01215ULL);
        std::vector<std::vector<double>> m(kFoilLatentDim,
                                           std::vector<double>(kFoilDim));
        for (auto& row : m) {
            for (double& v : row) v = stream.next_gaussian();
        }
        // Gram-Schmidt.
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const double proj = simd::dot(m[i].data(), m[j].data(), kFoilDim);
                simd::axpy(-proj, m[j].data(), m[i].data(), kFoilDim);
            }
            const double norm = std::sqrt(simd::dot(m[i].data(), m[i].data(), kFoilDim));
            for (double& v : m[i]) v /= norm;
        }
        return m;
    }();
    return rows;
}

std::vector<double> foil_latent(const ParameterVector& x) {
    std::vector<double> z(kFoilLatentDim);
    std::vector<double> centered(kFoilDim);
    for (std::size_t j = 0; j < kFoilDim; ++j) centered[j] = x[j] - 0.5;
    for (std::size_t c = 0; c < kFoilLatentDim; ++c) {
        z[c] = simd::dot(latent_map()[c].data(), centered.data(), kFoilDim);
    }
    return z;
}

void check_foil_input(const ParameterVector& x) {
    if (x.size() != kFoilDim) {
        throw std::domain_error("foil proxy: input must be 15-dimensional");
    }
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::domain_error("foil proxy: input outside unit bounds");
        }
    }
}

} // namespace

const std::vector<double>& foil_latent_row(std::size_t c) {
    return latent_map().at(c);
}

double foil_drag(const ParameterVector& x) {
    check_foil_input(x);
    const auto z = foil_latent(x);
    double quad = 0.0, ripple = 0.0;
    for (double v : z) {
        quad += v * v;
        ripple += 1.0 - std::cos(3.0 * M_PI * v);
    }
    const double cross = 0.1 * std::sin(4.0 * z[0] * z[1]);
    return 1.0 + 0.3 * quad + 0.15 * ripple + cross;
}

FeatureCoordinates foil_features(const ParameterVector& x) {
    check_foil_input(x);
    // Smooth functionals of the first two latent coordinates. Tying the
    // map to directions the objective actually varies along mirrors how
    // descriptive shape features correlate with performance-relevant
    // parameters, and it gives feature-space segments a genuinely local
    // slice of the drag landscape.
    const auto z = foil_latent(x);
    const double area_like = 0.5 * (1.0 + std::tanh(2.0 * z[0]));
    const double camber_like = 0.5 * (1.0 + std::tanh(2.0 * z[1]));
    return {area_like, camber_like};
}

namespace {

std::map<std::string, BenchmarkProblem> make_registry() {
    std::map<std::string, BenchmarkProblem> reg;

    auto clamp01_feature = [](const DomainSpec& spec, std::size_t nfeat) {
        return [spec, nfeat](const ParameterVector& x) {
            FeatureCoordinates f(nfeat);
            for (std::size_t i = 0; i < nfeat; ++i) {
                f[i] = (x[i] - spec.lower[i]) / spec.range(i);
            }
            return f;
        };
    };

    {
        BenchmarkProblem p;
        p.name = "ackley-1d";
        p.spec = DomainSpec::make({-32.768}, {32.768}, 1);
        p.objective = [](const ParameterVector& x) { return ackley(x); };
        p.fitness = [](const ParameterVector& x) { return -ackley(x); };
        p.features = clamp01_feature(p.spec, 1);
        p.optimum = {{ParameterVector{0.0}, 0.0}};
        reg.emplace(p.name, std::move(p));
    }
    {
        BenchmarkProblem p;
        p.name = "ackley-2d";
        p.spec = DomainSpec::make({-32.768, -32.768}, {32.768, 32.768}, 2);
        p.objective = [](const ParameterVector& x) { return ackley(x); };
        p.fitness = [](const ParameterVector& x) { return -ackley(x); };
        p.features = clamp01_feature(p.spec, 2);
        p.optimum = {{ParameterVector{0.0, 0.0}, 0.0}};
        reg.emplace(p.name, std::move(p));
    }
    {
        BenchmarkProblem p;
        p.name = "rastrigin-2d";
        p.spec = DomainSpec::make({-5.12, -5.12}, {5.12, 5.12}, 2);
        p.objective = [](const ParameterVector& x) { return rastrigin(x); };
        // Offset keeps fitness positive so QD-score rewards coverage.
        p.fitness = [](const ParameterVector& x) { return 100.0 - rastrigin(x); };
        p.features = clamp01_feature(p.spec, 2);
        p.optimum = {{ParameterVector{0.0, 0.0}, 0.0}};
        reg.emplace(p.name, std::move(p));
    }
    {
        BenchmarkProblem p;
        p.name = "foil-proxy";
        p.spec = DomainSpec::unit(kFoilDim, 2);
        p.objective = foil_drag;
        p.fitness = [](const ParameterVector& x) { return 8.0 - foil_drag(x); };
        p.features = foil_features;
        reg.emplace(p.name, std::move(p));
    }
    return reg;
}

} // namespace

const BenchmarkProblem& get_problem(const std::string& name) {
    static const auto registry = make_registry();
    const auto it = registry.find(name);
    if (it == registry.end()) {
        throw std::invalid_argument("unknown problem: " + name);
    }
    return it->second;
}

std::vector<std::string> problem_names() {
    static const auto registry = make_registry();
    std::vector<std::string> names;
    for (const auto& [name, _] : registry) names.push_back(name);
    return names;
}

} // namespace sailkit
